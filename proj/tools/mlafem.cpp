#include "mlafem/driver.hpp"
#include "mlafem/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_usage = 2;

int do_run(const mlafem::RunSpec& spec) {
  const auto outcome = mlafem::run(spec);
  std::cout << "wrote " << outcome.csv_path << " (" << outcome.rows.size() << " rows)\n";
  if (!outcome.rows.empty()) {
    const auto& last = outcome.rows.back();
    std::printf("final level %d: dofs %d, value %.12g, error %.3e\n", last.level, last.dofs, last.lambda, last.err_vs_ref);
  }
  return exit_ok;
}

int do_rate(const std::string& path, int window) {
  const auto reports = mlafem::fit_rates(mlafem::read_csv_file(path), window);
  std::printf("%-9s %-10s %10s %8s %10s %8s\n", "eig_index", "points", "err_slope", "err_R2", "eta_slope", "eta_R2");
  for (const auto& r : reports) {
    if (r.error) {
      std::printf("%-9d %-10d %10.4f %8.4f %10.4f %8.4f\n", r.eig_index, r.eta.points, r.error->slope, r.error->r_squared,
                  r.eta.slope, r.eta.r_squared);
    } else {
      std::printf("%-9d %-10d %10s %8s %10.4f %8.4f\n", r.eig_index, r.eta.points, "n/a", "n/a", r.eta.slope,
                  r.eta.r_squared);
    }
  }
  return exit_ok;
}

int do_compare(const std::string& a, const std::string& b) {
  const auto entries = mlafem::compare_runs(mlafem::read_csv_file(a), mlafem::read_csv_file(b));
  std::printf("%-5s %-7s %-7s %9s %9s %11s %11s %10s %10s\n", "eig", "level_a", "level_b", "dofs_a", "dofs_b", "err_a", "err_b",
              "err_ratio", "teig_ratio");
  for (const auto& e : entries) {
    std::printf("%-5d %-7d %-7d %9d %9d %11.4e %11.4e %10.4f %10.4f\n", e.eig_index, e.level_a, e.level_b, e.dofs_a,
                e.dofs_b, e.err_a, e.err_b, e.error_ratio, e.eig_time_ratio);
  }
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive finite element eigenvalue solver with multilevel correction"};
  app.require_subcommand(1);

  mlafem::RunSpec spec;
  auto* run = app.add_subcommand("run", "run one experiment and write levels.csv");
  run->add_option("--problem", spec.problem, "oracle_square, example1, example2 or example3")->capture_default_str();
  run->add_option("--algorithm", spec.algorithm, "mlc, direct, bvp or uniform")->capture_default_str();
  run->add_option("--theta", spec.theta, "Doerfler bulk parameter in (0,1)")->capture_default_str();
  run->add_option("--q", spec.q, "number of eigenpairs")->capture_default_str();
  run->add_option("--max-dofs", spec.max_dofs, "stop before solving on a mesh with more free dofs")->capture_default_str();
  run->add_option("--max-iterations", spec.max_iterations, "number of refinement steps")->capture_default_str();
  run->add_option("--out", spec.out_dir, "output directory")->capture_default_str();
  run->add_flag("--export-vtk", spec.export_vtk, "write level_NNN.vtk per level");
  run->add_option("--mesh-file", spec.mesh_file, "initial mesh in text format");
  run->add_option("--seed", spec.seed, "seed for randomized components")->capture_default_str();
  run->add_flag("--deterministic", spec.zero_timings, "write timing columns as 0 for byte-identical reruns");

  std::string rate_csv;
  int window = 8;
  auto* rate = app.add_subcommand("rate", "fit log-log convergence slopes over the trailing levels");
  rate->add_option("csv", rate_csv, "levels.csv")->required();
  rate->add_option("--window", window, "number of trailing levels")->capture_default_str();

  std::string csv_a, csv_b;
  auto* compare = app.add_subcommand("compare", "compare two runs at matched dof counts");
  compare->add_option("csv_a", csv_a, "first levels.csv")->required();
  compare->add_option("csv_b", csv_b, "second levels.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*run) return do_run(spec);
    if (*rate) return do_rate(rate_csv, window);
    return do_compare(csv_a, csv_b);
  } catch (const mlafem::ConfigurationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const mlafem::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

#ifndef MLAFEM_DRIVER_HPP
#define MLAFEM_DRIVER_HPP

#include "algorithm.hpp"
#include "errors.hpp"
#include "io/mesh_io.hpp"
#include "io/vtk.hpp"
#include "problems.hpp"
#include "report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mlafem {

enum class AlgorithmKind { mlc, direct, bvp, uniform };

inline AlgorithmKind parse_algorithm(const std::string& s) {
  if (s == "mlc") return AlgorithmKind::mlc;
  if (s == "direct") return AlgorithmKind::direct;
  if (s == "bvp") return AlgorithmKind::bvp;
  if (s == "uniform") return AlgorithmKind::uniform;
  throw ConfigurationError("unknown algorithm '" + s + "' (expected mlc, direct, bvp or uniform)");
}

struct RunSpec {
  std::string problem = "oracle_square";
  std::string algorithm = "mlc";
  double theta = 0.4; // ignored by "uniform"
  int q = 1;
  long max_dofs = 200000;
  int max_iterations = 20;
  unsigned seed = 20120501u;
  std::string out_dir = ".";
  bool export_vtk = false;
  std::string mesh_file;     // empty: the problem's default coarse mesh
  bool zero_timings = false; // byte-identical CSV across reruns

  void validate() const {
    (void)problems::by_name(problem);
    const AlgorithmKind kind = parse_algorithm(algorithm);
    if (kind != AlgorithmKind::uniform && !(theta > 0.0 && theta < 1.0)) throw ConfigurationError("theta must lie in (0,1)");
    if (q < 1) throw ConfigurationError("q must be >= 1");
    if (kind == AlgorithmKind::bvp && q != 1) throw ConfigurationError("algorithm bvp computes a single solution; q must be 1");
    if (max_dofs < 1) throw ConfigurationError("max-dofs must be positive");
    if (max_iterations < 0) throw ConfigurationError("max-iterations must be >= 0");
  }

  [[nodiscard]] AdaptiveConfig config() const {
    AdaptiveConfig c;
    c.theta = parse_algorithm(algorithm) == AlgorithmKind::uniform ? 0.5 : theta;
    c.num_eigenpairs = q;
    c.max_dofs = max_dofs;
    c.max_iterations = max_iterations;
    return c;
  }
};

struct RunOutcome {
  std::vector<CsvRow> rows;
  std::string csv_path;
  std::vector<std::string> vtk_paths;
};

/// Runs one experiment and writes <out_dir>/levels.csv (plus level_NNN.vtk
/// files with export_vtk). Throws ConfigurationError/ParseError on bad input
/// and other mlafem::Error subclasses on numerical failure.
inline RunOutcome run(const RunSpec& spec) {
  spec.validate();
  const AlgorithmKind kind = parse_algorithm(spec.algorithm);
  const AdaptiveConfig cfg = spec.config();
  std::optional<Mesh> initial;
  if (!spec.mesh_file.empty()) {
    try {
      initial = io::read_mesh_file(spec.mesh_file);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("mesh file '" + spec.mesh_file + "': " + e.what());
    }
  }

  std::filesystem::create_directories(spec.out_dir);
  RunOutcome outcome;
  auto vtk_name = [&](int level) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "level_%03d.vtk", level);
    return (std::filesystem::path(spec.out_dir) / buf).string();
  };

  if (kind == AlgorithmKind::bvp) {
    const SourceProblem source = problems::source_by_name(spec.problem);
    BvpObserver observer;
    if (spec.export_vtk) {
      observer = [&](const BvpLevelRecord& rec, const Mesh& mesh, std::span<const double> u, const IndicatorField& field) {
        const io::VtkField point[] = {{"u", u}};
        const io::VtkField cell[] = {{"eta_sq", field.eta_sq}};
        outcome.vtk_paths.push_back(vtk_name(rec.level));
        io::write_vtk_file(outcome.vtk_paths.back(), mesh, point, cell);
      };
    }
    outcome.rows = csv_rows(afem_bvp_solve(source, cfg, initial, observer), spec.zero_timings);
  } else {
    const ProblemDef problem = problems::by_name(spec.problem);
    LevelObserver observer;
    if (spec.export_vtk) {
      observer = [&](const LevelRecord& rec, const Mesh& mesh, std::span<const Vector> fns, const IndicatorField& field) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < fns.size(); ++i) names.push_back("u" + std::to_string(i));
        std::vector<io::VtkField> point;
        for (std::size_t i = 0; i < fns.size(); ++i) point.push_back({names[i], fns[i]});
        const io::VtkField cell[] = {{"eta_sq", field.eta_sq}};
        outcome.vtk_paths.push_back(vtk_name(rec.level));
        io::write_vtk_file(outcome.vtk_paths.back(), mesh, point, cell);
      };
    }
    AdaptiveResult result;
    switch (kind) {
    case AlgorithmKind::mlc: result = multilevel_correction_solve(problem, cfg, initial, observer); break;
    case AlgorithmKind::direct: result = direct_afem_solve(problem, cfg, initial, observer); break;
    default: result = uniform_refinement_solve(problem, cfg, initial, observer); break;
    }
    outcome.rows = csv_rows(result, spec.zero_timings);
  }
  outcome.csv_path = (std::filesystem::path(spec.out_dir) / "levels.csv").string();
  write_csv_file(outcome.csv_path, outcome.rows);
  return outcome;
}

} // namespace mlafem

#endif

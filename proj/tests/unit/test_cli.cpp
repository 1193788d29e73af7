#include "mlafem/io/mesh_io.hpp"
#include "mlafem/mesh.hpp"
#include "mlafem/report.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(MLAFEM_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::current_path() / "cli_out" / name;
  fs::remove_all(d);
  return d;
}

} // namespace

TEST(Cli, RunWritesOneRowPerLevel) {
  const fs::path out = fresh_dir("oracle");
  const Result r = run_cli("run --problem oracle_square --algorithm mlc --theta 0.4 --max-iterations 8 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rows = mlafem::read_csv_file((out / "levels.csv").string());
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].level, static_cast<int>(i));
  EXPECT_LT(rows.back().err_vs_ref, rows.front().err_vs_ref);
}

TEST(Cli, UnknownProblemOrAlgorithmIsUsageError) {
  EXPECT_EQ(run_cli("run --problem helmholtz --out " + fresh_dir("bad1").string()).code, 2);
  EXPECT_EQ(run_cli("run --algorithm lanczos --out " + fresh_dir("bad2").string()).code, 2);
  EXPECT_EQ(run_cli("run --theta 1.5 --out " + fresh_dir("bad3").string()).code, 2);
  EXPECT_EQ(run_cli("run --algorithm bvp --q 2 --out " + fresh_dir("bad4").string()).code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(Cli, DeterministicRerunsAreByteIdentical) {
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  const std::string args = "run --problem example2 --algorithm mlc --max-iterations 4 --deterministic --out ";
  ASSERT_EQ(run_cli(args + a.string()).code, 0);
  ASSERT_EQ(run_cli(args + b.string()).code, 0);
  const std::string ca = slurp(a / "levels.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b / "levels.csv"));
}

TEST(Cli, RateAndCompareSubcommands) {
  const fs::path a = fresh_dir("rate_a"), b = fresh_dir("rate_b");
  ASSERT_EQ(run_cli("run --problem oracle_square --algorithm mlc --max-iterations 8 --out " + a.string()).code, 0);
  ASSERT_EQ(run_cli("run --problem oracle_square --algorithm direct --max-iterations 8 --out " + b.string()).code, 0);
  const Result rate = run_cli("rate " + (a / "levels.csv").string());
  EXPECT_EQ(rate.code, 0) << rate.output;
  EXPECT_NE(rate.output.find("err_slope"), std::string::npos);
  const Result cmp = run_cli("compare " + (a / "levels.csv").string() + " " + (b / "levels.csv").string());
  EXPECT_EQ(cmp.code, 0) << cmp.output;
  EXPECT_NE(cmp.output.find("err_ratio"), std::string::npos);
  EXPECT_EQ(run_cli("rate " + (a / "missing.csv").string()).code, 2);
  EXPECT_EQ(run_cli("rate --window 2 " + (a / "levels.csv").string()).code, 2);
}

TEST(Cli, SeveralEigenpairsWithDirectMethod) {
  const fs::path out = fresh_dir("q5");
  const Result r = run_cli("run --problem example2 --algorithm direct --q 5 --max-dofs 3000 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rows = mlafem::read_csv_file((out / "levels.csv").string());
  std::map<int, std::set<int>> per_level;
  for (const auto& row : rows) per_level[row.level].insert(row.eig_index);
  ASSERT_FALSE(per_level.empty());
  for (const auto& [level, idx] : per_level) EXPECT_EQ(idx, (std::set<int>{0, 1, 2, 3, 4})) << level;
  for (const auto& row : rows) EXPECT_LE(row.dofs, 3000);
}

TEST(Cli, BvpAndUniformAlgorithms) {
  const fs::path a = fresh_dir("bvp"), b = fresh_dir("uniform");
  ASSERT_EQ(run_cli("run --problem oracle_square --algorithm bvp --max-iterations 5 --out " + a.string()).code, 0);
  EXPECT_EQ(mlafem::read_csv_file((a / "levels.csv").string()).size(), 6u);
  ASSERT_EQ(run_cli("run --problem oracle_square --algorithm uniform --max-iterations 2 --out " + b.string()).code, 0);
  const auto rows = mlafem::read_csv_file((b / "levels.csv").string());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].elements, 4 * rows[0].elements);
}

TEST(Cli, VtkExportAndMeshFile) {
  const fs::path out = fresh_dir("vtk");
  fs::create_directories(out);
  const mlafem::Mesh m = mlafem::initial_mesh(mlafem::DomainDef::square(0, 1), 4);
  mlafem::io::write_mesh_file((out / "coarse.mesh").string(), m);
  const Result r = run_cli("run --problem oracle_square --max-iterations 2 --export-vtk --mesh-file " +
                           (out / "coarse.mesh").string() + " --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"level_000.vtk", "level_001.vtk", "level_002.vtk"}) {
    const std::string text = slurp(out / f);
    EXPECT_EQ(text.rfind("# vtk DataFile", 0), 0u) << f;
    EXPECT_NE(text.find("SCALARS u0"), std::string::npos);
    EXPECT_NE(text.find("SCALARS eta_sq"), std::string::npos);
  }
  EXPECT_EQ(mlafem::read_csv_file((out / "levels.csv").string()).front().dofs, 9);

  std::ofstream(out / "broken.mesh") << "not a mesh\n";
  EXPECT_EQ(run_cli("run --mesh-file " + (out / "broken.mesh").string() + " --out " + out.string()).code, 2);
}

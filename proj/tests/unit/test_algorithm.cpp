#include "mlafem/algorithm.hpp"
#include "mlafem/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mlafem;

namespace {

AdaptiveConfig config(int iterations, int q = 1, double theta = 0.4) {
  AdaptiveConfig c;
  c.max_iterations = iterations;
  c.num_eigenpairs = q;
  c.theta = theta;
  return c;
}

// Least-squares slope of log y against log x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST(Config, Validation) {
  AdaptiveConfig c;
  EXPECT_NO_THROW(c.validate());
  c.theta = 1.0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = AdaptiveConfig{};
  c.num_eigenpairs = 0;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c = AdaptiveConfig{};
  c.max_iterations = -1;
  EXPECT_THROW(c.validate(), ConfigurationError);
}

TEST(MultilevelCorrection, OracleErrorDecreases) {
  const ProblemDef p = problems::oracle_square();
  const AdaptiveResult r = multilevel_correction_solve(p, config(8));
  ASSERT_EQ(r.levels.size(), 9u);
  const double first = r.levels.front().errors[0];
  const double last = r.levels.back().errors[0];
  EXPECT_LT(last, first / 10);
  for (const auto& rec : r.levels) {
    EXPECT_GE(rec.eigenvalues[0], *p.reference(0) - 1e-9);
    EXPECT_GT(rec.eta[0], 0.0);
  }
  EXPECT_EQ(r.mesh.num_free_dofs(), r.levels.back().dofs);
  EXPECT_EQ(r.pairs.size(), 1u);
}

TEST(MultilevelCorrection, ZeroIterationsGivesCoarseLevelOnly) {
  const AdaptiveResult r = multilevel_correction_solve(problems::oracle_square(), config(0));
  ASSERT_EQ(r.levels.size(), 1u);
  EXPECT_EQ(r.levels[0].level, 0);
  EXPECT_EQ(r.levels[0].dofs, 49);
}

TEST(MultilevelCorrection, CoarseLevelMatchesDirectMethod) {
  const ProblemDef p = problems::example2();
  const Mesh coarse = initial_mesh(p.domain, 4);
  const AdaptiveResult a = multilevel_correction_solve(p, config(0, 2), coarse);
  const AdaptiveResult b = direct_afem_solve(p, config(0, 2), coarse);
  ASSERT_EQ(a.levels[0].eigenvalues.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(a.levels[0].eigenvalues[i], b.levels[0].eigenvalues[i]);
}

TEST(MultilevelCorrection, FineLevelsUseLinearSolvesOnly) {
  const ProblemDef p = problems::example2();
  const int q = 3;
  const AdaptiveResult r = multilevel_correction_solve(p, config(4, q), initial_mesh(p.domain, 4));
  ASSERT_EQ(r.levels.size(), 5u);
  EXPECT_GT(r.levels[0].work.eigen_sweeps, 0);
  for (std::size_t l = 1; l < r.levels.size(); ++l) {
    EXPECT_EQ(r.levels[l].work.eigen_sweeps, 0);
    EXPECT_EQ(r.levels[l].work.cg_solves, q);
    EXPECT_EQ(r.levels[l].work.dense_eigensolves, 1);
    EXPECT_GT(r.levels[l].dofs, r.levels[l - 1].dofs);
    for (int i = 1; i < q; ++i) EXPECT_LE(r.levels[l].eigenvalues[i - 1], r.levels[l].eigenvalues[i]);
  }
}

TEST(MultilevelCorrection, ObserverSeesEveryLevel) {
  int calls = 0;
  const LevelObserver obs = [&](const LevelRecord& rec, const Mesh& m, std::span<const Vector> fns, const IndicatorField& f) {
    EXPECT_EQ(rec.level, calls);
    EXPECT_EQ(fns.size(), 1u);
    EXPECT_EQ(static_cast<int>(fns[0].size()), m.num_vertices());
    EXPECT_EQ(static_cast<int>(f.size()), m.num_elements());
    ++calls;
  };
  const AdaptiveResult r = multilevel_correction_solve(problems::oracle_square(), config(3), std::nullopt, obs);
  EXPECT_EQ(calls, 4);
  EXPECT_EQ(r.levels.size(), 4u);
}

TEST(MultilevelCorrection, MaxDofsStopsLoop) {
  AdaptiveConfig c = config(50);
  c.max_dofs = 300;
  const AdaptiveResult r = multilevel_correction_solve(problems::oracle_square(), c);
  EXPECT_LT(r.levels.size(), 51u);
  for (const auto& rec : r.levels) EXPECT_LE(rec.dofs, 300);
}

TEST(MultilevelCorrection, TracksAgainstDirectMethod) {
  // Both methods see identical meshes only at level 0, but errors stay comparable.
  const ProblemDef p = problems::example2();
  const Mesh coarse = initial_mesh(p.domain, 4);
  const AdaptiveResult a = multilevel_correction_solve(p, config(10), coarse);
  const AdaptiveResult b = direct_afem_solve(p, config(10), coarse);
  const double ea = a.levels.back().errors[0], eb = b.levels.back().errors[0];
  EXPECT_LT(ea / eb, 2.0);
  EXPECT_GT(ea / eb, 0.5);
}

TEST(DirectAfem, SeveralEigenvaluesAscending) {
  const ProblemDef p = problems::example2();
  const AdaptiveResult r = direct_afem_solve(p, config(3, 5), initial_mesh(p.domain, 2));
  for (const auto& rec : r.levels) {
    ASSERT_EQ(rec.eigenvalues.size(), 5u);
    for (int i = 1; i < 5; ++i) EXPECT_LE(rec.eigenvalues[i - 1], rec.eigenvalues[i]);
    EXPECT_TRUE(std::isnan(rec.errors[1]));
  }
}

TEST(UniformRefinement, QuadraticConvergenceOnSquare) {
  const ProblemDef p = problems::oracle_square();
  const AdaptiveResult r = uniform_refinement_solve(p, config(3), initial_mesh(p.domain, 4));
  ASSERT_EQ(r.levels.size(), 4u);
  for (std::size_t l = 1; l < r.levels.size(); ++l) {
    const double order = std::log2(r.levels[l - 1].errors[0] / r.levels[l].errors[0]);
    EXPECT_GE(order, 1.7);
    EXPECT_LE(order, 2.3);
  }
}

TEST(AugmentedSpace, DependentVectorsDropped) {
  const ProblemDef p = problems::oracle_square();
  const Mesh coarse = initial_mesh(p.domain, 4);
  const Mesh fine = coarse.refine_uniform(2);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(fine, p), fine);
  const SparseMatrix m = apply_dirichlet(assemble_mass(fine), fine);
  const SparseMatrix b0 = detail::restricted_prolongation(coarse, fine);
  // A vector already in span(B0) and a duplicated fine vector.
  Vector in_coarse = b0 * Vector(static_cast<std::size_t>(b0.cols()), 1.0);
  Vector fresh(static_cast<std::size_t>(k.rows()));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> val(-1, 1);
  for (double& x : fresh) x = val(rng);
  std::vector<Vector> extra{in_coarse, fresh, fresh};
  int dropped = -1;
  const EigenSet s = solve_augmented_space(k, m, b0, extra, 1, &dropped);
  EXPECT_EQ(dropped, 2);
  EXPECT_EQ(extra.size(), 1u);
  for (std::size_t j = 0; j < static_cast<std::size_t>(b0.cols()); ++j) {
    Vector e(static_cast<std::size_t>(b0.cols()), 0.0);
    e[j] = 1.0;
    EXPECT_NEAR(dot(b0 * e, m * extra[0]), 0.0, 1e-10);
  }
  EXPECT_GE(s[0].lambda, 2 * std::numbers::pi * std::numbers::pi);
}

TEST(ExpansionIdentity, HoldsForRandomVectors) {
  const ProblemDef p = problems::example3();
  const Mesh m = initial_mesh(p.domain, 3);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(m, p), m);
  const SparseMatrix mm = apply_dirichlet(assemble_mass(m), m);
  // Dense solve of the small pencil: eigenpairs exact to roundoff.
  auto densify = [](const SparseMatrix& s) {
    DenseMatrix d(s.rows(), s.cols());
    for (int i = 0; i < s.rows(); ++i) {
      const auto c = s.row_columns(i);
      const auto v = s.row_values(i);
      for (std::size_t j = 0; j < c.size(); ++j) d(i, c[j]) = v[j];
    }
    return d;
  };
  const EigenSet pairs = dense_sym_gen_eig(densify(k), densify(mm), 2);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> val(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const EigenPair& pair = pairs[trial % 2];
    Vector w = pair.u;
    const double size = trial < 10 ? 1e-3 : 1.0;
    for (double& x : w) x += size * val(rng);
    const double scale = std::max(1.0, bilinear(k, w, w) / bilinear(mm, w, w));
    EXPECT_LE(eigenvalue_error_expansion_check(k, mm, pair, w) / scale, 1e-12);
  }
  EXPECT_THROW(eigenvalue_error_expansion_check(k, mm, pairs[0], Vector(pairs[0].u.size(), 0.0)), ConfigurationError);
}

TEST(Bvp, ZeroSourceGivesZeroAndStops) {
  SourceProblem s = problems::manufactured_square();
  s.f = [](Point2) { return 0.0; };
  s.exact = nullptr;
  s.exact_gradient = nullptr;
  const BvpResult r = afem_bvp_solve(s, config(10));
  ASSERT_EQ(r.levels.size(), 1u);
  for (double x : r.u) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(r.levels[0].eta, 0.0);
}

TEST(Bvp, ManufacturedSolutionOptimalRate) {
  const SourceProblem s = problems::manufactured_square();
  const BvpResult r = afem_bvp_solve(s, config(14), initial_mesh(s.op.domain, 4));
  std::vector<double> dofs, err;
  for (std::size_t l = r.levels.size() - 8; l < r.levels.size(); ++l) {
    dofs.push_back(r.levels[l].dofs);
    err.push_back(r.levels[l].error);
  }
  const double k = slope(dofs, err);
  EXPECT_GT(k, -0.6);
  EXPECT_LT(k, -0.4);
}

TEST(Bvp, LShapeRefinesTowardsReentrantCorner) {
  const SourceProblem s = problems::l_shape_unit_load();
  const BvpResult r = afem_bvp_solve(s, config(12), initial_mesh(s.op.domain, 2));
  int deepest = -1;
  double distance_to_corner = 0.0;
  for (int e = 0; e < r.mesh.num_elements(); ++e) {
    const int gen = r.mesh.triangle(r.mesh.active()[e]).generation;
    if (gen > deepest) {
      deepest = gen;
      const auto g = r.mesh.geometry(e);
      const Point2 c = g.map(1.0 / 3, 1.0 / 3, 1.0 / 3);
      distance_to_corner = std::hypot(c.x, c.y);
    }
  }
  EXPECT_LT(distance_to_corner, 0.1);
  // Energy a(u_h, u_h) increases monotonically under nested refinement.
  for (std::size_t l = 1; l < r.levels.size(); ++l) EXPECT_GE(r.levels[l].energy, r.levels[l - 1].energy - 1e-14);
}

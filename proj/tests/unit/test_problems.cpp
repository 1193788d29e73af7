#include "mlafem/assembly.hpp"
#include "mlafem/eigensolver.hpp"
#include "mlafem/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mlafem;

namespace {

double interpolant_rayleigh_quotient(const Mesh& m, const ProblemDef& p, const ScalarField& f) {
  Vector u(static_cast<std::size_t>(m.num_vertices()));
  for (int i = 0; i < m.num_vertices(); ++i) u[i] = f(m.point(i));
  const Vector r = apply_dirichlet(u, m);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(m, p), m);
  const SparseMatrix mm = apply_dirichlet(assemble_mass(m), m);
  return bilinear(k, r, r) / bilinear(mm, r, r);
}

} // namespace

TEST(Problems, PotentialValues) {
  EXPECT_EQ(problems::example1().potential({3.0, 4.0}), 12.5);
  EXPECT_EQ(problems::example2().potential({0.3, 0.1}), 0.0);
  EXPECT_DOUBLE_EQ(problems::example3().potential({1.0, 1.0}), std::exp(0.25));
  EXPECT_DOUBLE_EQ(problems::example3().potential({0.5, 0.9}), 1.0);
}

TEST(Problems, ExampleThreeDivergenceAtCentre) {
  const Vec2 d = problems::example3().div_A({0.5, 0.5});
  EXPECT_EQ(d.x, 0.0);
  EXPECT_EQ(d.y, 0.0);
}

TEST(Problems, DomainAreas) {
  EXPECT_DOUBLE_EQ(problems::example1().domain.area(), 100.0);
  EXPECT_DOUBLE_EQ(problems::example2().domain.area(), 3.0);
  EXPECT_DOUBLE_EQ(problems::example3().domain.area(), 3.0);
  EXPECT_DOUBLE_EQ(problems::oracle_square().domain.area(), 1.0);
}

TEST(Problems, TensorsAreSymmetricPositiveDefinite) {
  std::mt19937 rng(3);
  for (const auto& name : problems::names()) {
    const ProblemDef p = problems::by_name(name);
    std::uniform_real_distribution<double> x(p.domain.lo, p.domain.hi);
    for (int i = 0; i < 50; ++i) {
      const SymMat2 a = p.A({x(rng), x(rng)});
      EXPECT_GT(a.xx, 0.0) << name;
      EXPECT_GT(a.xx * a.yy - a.xy * a.xy, 0.0) << name;
    }
  }
}

TEST(Problems, AnalyticDivergenceMatchesFiniteDifferences) {
  const ProblemDef p = problems::example3();
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> x(-1.0, 1.0);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const Point2 c{x(rng), x(rng)};
    const SymMat2 xp = p.A({c.x + h, c.y}), xm = p.A({c.x - h, c.y});
    const SymMat2 yp = p.A({c.x, c.y + h}), ym = p.A({c.x, c.y - h});
    const double d1 = (xp.xx - xm.xx) / (2 * h) + (yp.xy - ym.xy) / (2 * h);
    const double d2 = (xp.xy - xm.xy) / (2 * h) + (yp.yy - ym.yy) / (2 * h);
    const Vec2 d = p.div_A(c);
    EXPECT_NEAR(d.x, d1, 1e-6);
    EXPECT_NEAR(d.y, d2, 1e-6);
  }
}

TEST(Problems, HarmonicOscillatorGroundStateRayleighQuotient) {
  const ProblemDef p = problems::example1();
  const Mesh m = initial_mesh(p.domain, p.coarse_cells).refine_uniform(4);
  const double rq = interpolant_rayleigh_quotient(m, p, [](Point2 x) { return std::exp(-0.5 * (x.x * x.x + x.y * x.y)); });
  EXPECT_NEAR(rq, 1.0, 1e-2);
}

TEST(Problems, SquareGroundStateRayleighQuotient) {
  const ProblemDef p = problems::oracle_square();
  const double pi = std::numbers::pi;
  const Mesh m = initial_mesh(p.domain, 64);
  const double rq = interpolant_rayleigh_quotient(m, p, [pi](Point2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y); });
  EXPECT_NEAR(rq, 2 * pi * pi, 2e-2);
  EXPECT_GE(rq, 2 * pi * pi);
}

TEST(Problems, CoarseLShapeEigenvalueAboveReference) {
  const ProblemDef p = problems::example2();
  const Mesh m = initial_mesh(p.domain, 4);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(m, p), m);
  const SparseMatrix mm = apply_dirichlet(assemble_mass(m), m);
  EXPECT_GE(sparse_smallest_eigs(k, mm, 1)[0].lambda, *p.reference(0));
}

TEST(Problems, ReferenceValuesAndLookup) {
  EXPECT_NEAR(*problems::oracle_square().reference(0), 2 * std::numbers::pi * std::numbers::pi, 1e-14);
  EXPECT_FALSE(problems::example1().reference(1).has_value());
  EXPECT_THROW(problems::by_name("helmholtz"), ConfigurationError);
  for (const auto& name : problems::names()) {
    EXPECT_EQ(problems::by_name(name).name, name);
    EXPECT_NO_THROW(problems::by_name(name).validate());
  }
}

TEST(Problems, ManufacturedSourceIsConsistent) {
  const SourceProblem s = problems::manufactured_square();
  // -Lap u = f for u = sin(pi x) sin(pi y).
  const double h = 1e-4;
  const Point2 c{0.3, 0.7};
  const double lap = (s.exact({c.x + h, c.y}) + s.exact({c.x - h, c.y}) + s.exact({c.x, c.y + h}) + s.exact({c.x, c.y - h}) -
                      4 * s.exact(c)) /
                     (h * h);
  EXPECT_NEAR(-lap, s.f(c), 1e-5);
}

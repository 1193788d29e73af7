#include "mlafem/assembly.hpp"
#include "mlafem/problems.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mlafem;

namespace {

ProblemDef laplace(double scale = 1.0) {
  ProblemDef p;
  p.name = "laplace";
  p.A = [scale](Point2) { return SymMat2::identity(scale); };
  p.domain = DomainDef::square(0, 1);
  return p;
}

Mesh unit_right_triangle() {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<std::array<int, 3>> t{{0, 1, 2}};
  return Mesh::from_arrays(pts, t);
}

// Local matrix in the input vertex numbering (the mesh may rotate vertices).
ElementMatrix local_in_input_order(const Mesh& m, const ElementMatrix& k) {
  ElementMatrix out{};
  const auto& v = m.element_vertices(0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[v[i]][v[j]] = k[i][j];
  }
  return out;
}

} // namespace

TEST(ElementMatrices, LaplaceStiffnessOnUnitRightTriangle) {
  const Mesh m = unit_right_triangle();
  const ElementMatrix k = local_in_input_order(m, element_stiffness(m.geometry(0), laplace()));
  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(k[i][j], expected[i][j], 1e-12);
  }
}

TEST(ElementMatrices, DoublingADoublesStiffness) {
  const Mesh m = initial_mesh(DomainDef::l_shape(), 2);
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto k1 = element_stiffness(m.geometry(e), laplace(1.0));
    const auto k2 = element_stiffness(m.geometry(e), laplace(2.0));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(k2[i][j], 2.0 * k1[i][j], 1e-12);
    }
  }
}

TEST(ElementMatrices, MassOnUnitRightTriangle) {
  const auto mm = element_mass(0.5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(mm[i][j], i == j ? 1.0 / 12.0 : 1.0 / 24.0, 1e-15);
  }
}

TEST(ElementMatrices, ConstantPotentialAddsMass) {
  const Mesh m = unit_right_triangle();
  ProblemDef p = laplace();
  p.phi = [](Point2) { return 3.0; };
  const auto k0 = element_stiffness(m.geometry(0), laplace());
  const auto k = element_stiffness(m.geometry(0), p);
  const auto mm = element_mass(0.5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(k[i][j], k0[i][j] + 3.0 * mm[i][j], 1e-12);
  }
}

TEST(ElementMatrices, LinearTensorMatchesAnalyticIntegral) {
  // A = (1 + x) I on the unit right triangle: int (1+x) = 1/2 + 1/6 = 2/3, so
  // K = (2/3) grad_i . grad_j since the gradients are constant.
  const Mesh m = unit_right_triangle();
  ProblemDef p = laplace();
  p.A = [](Point2 x) { return SymMat2::identity(1.0 + x.x); };
  p.divA = [](Point2) { return Vec2{1.0, 0.0}; };
  p.constant_A = false;
  const auto g = m.geometry(0);
  const auto k = element_stiffness(g, p);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(k[i][j], 2.0 / 3.0 * dot(g.grad_lambda[i], g.grad_lambda[j]), 1e-12);
  }
}

TEST(ElementMatrices, LinearPotentialRowSumsMatchAnalyticIntegral) {
  // phi = x on the unit right triangle. Row sums reduce to int x l_i (degree 2),
  // from  int l0^a l1^b l2^c = 2|T| a! b! c! / (a+b+c+2)!  with x = l_1 in input numbering.
  const Mesh m = unit_right_triangle();
  ProblemDef p = laplace();
  p.phi = [](Point2 x) { return x.x; };
  const auto k = local_in_input_order(m, element_stiffness(m.geometry(0), p));
  const auto k0 = local_in_input_order(m, element_stiffness(m.geometry(0), laplace()));
  const double expected[3] = {1.0 / 24.0, 1.0 / 12.0, 1.0 / 24.0};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) row += k[i][j] - k0[i][j];
    EXPECT_NEAR(row, expected[i], 1e-12) << i;
    total += row;
  }
  EXPECT_NEAR(total, 1.0 / 6.0, 1e-12);
}

TEST(ElementMatrices, ExampleThreeTensorIsIdentityAtCenter) {
  const auto p = problems::example3();
  const SymMat2 a = p.A({0.5, 0.5});
  EXPECT_EQ(a.xx, 1.0);
  EXPECT_EQ(a.xy, 0.0);
  EXPECT_EQ(a.yy, 1.0);
}

TEST(GlobalAssembly, StiffnessSymmetricWithZeroRowSums) {
  const Mesh m = bisect(initial_mesh(DomainDef::l_shape(), 2), std::vector<int>{0, 4, 9});
  const SparseMatrix k = assemble_stiffness(m, laplace());
  EXPECT_EQ(k.asymmetry(), 0.0);
  const Vector ones(static_cast<std::size_t>(m.num_vertices()), 1.0);
  for (double r : k * ones) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(GlobalAssembly, MassSumsToDomainArea) {
  for (const auto& [d, cells] : {std::pair{DomainDef::square(0, 1), 4}, std::pair{DomainDef::l_shape(), 3},
                                 std::pair{DomainDef::square(-5, 5), 6}}) {
    const Mesh m = initial_mesh(d, cells);
    const SparseMatrix mm = assemble_mass(m);
    const Vector ones(static_cast<std::size_t>(m.num_vertices()), 1.0);
    EXPECT_NEAR(dot(ones, mm * ones), d.area(), 1e-12 * d.area());
    EXPECT_EQ(mm.asymmetry(), 0.0);
  }
}

TEST(GlobalAssembly, LoadVectors) {
  const Mesh m = initial_mesh(DomainDef::square(0, 1), 5);
  const Vector zero = assemble_load(m, ScalarField([](Point2) { return 0.0; }));
  for (double z : zero) EXPECT_EQ(z, 0.0);
  const Vector one = assemble_load(m, ScalarField([](Point2) { return 1.0; }));
  double sum = 0.0;
  for (double x : one) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(GlobalAssembly, FeLoadEqualsMassTimesVector) {
  const Mesh m = bisect(initial_mesh(DomainDef::l_shape(), 2), std::vector<int>{1, 2});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> val(-1, 1);
  Vector u(static_cast<std::size_t>(m.num_vertices()));
  for (double& x : u) x = val(rng);
  const Vector load = assemble_load(m, u);
  const Vector mu = assemble_mass(m) * u;
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(load[i], mu[i], 1e-14);
  EXPECT_THROW(assemble_load(m, std::span<const double>(u.data(), u.size() - 1)), DimensionError);
}

TEST(Dirichlet, FreeDofCountAndSymmetry) {
  const Mesh m = initial_mesh(DomainDef::square(0, 1), 6);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(m, laplace()), m);
  EXPECT_EQ(k.rows(), 25);
  EXPECT_EQ(k.cols(), 25);
  EXPECT_EQ(k.asymmetry(), 0.0);
}

TEST(Dirichlet, AllBoundaryTriangleGivesEmptySystem) {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<std::array<int, 3>> t{{0, 1, 2}};
  const Mesh m = Mesh::from_arrays(pts, t);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(m, laplace()), m);
  EXPECT_EQ(k.rows(), 0);
  EXPECT_EQ(apply_dirichlet(Vector{1, 2, 3}, m).size(), 0u);
}

TEST(Dirichlet, ExpandRestoresZerosOnBoundary) {
  const Mesh m = initial_mesh(DomainDef::l_shape(), 2);
  Vector r(static_cast<std::size_t>(m.num_free_dofs()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 + static_cast<double>(i);
  const Vector full = expand_dirichlet(r, m);
  ASSERT_EQ(static_cast<int>(full.size()), m.num_vertices());
  for (int i = 0; i < m.num_vertices(); ++i) {
    if (m.vertex(i).boundary_flag) {
      EXPECT_EQ(full[i], 0.0);
    }
  }
  const Vector back = apply_dirichlet(full, m);
  EXPECT_EQ(back, r);
}

TEST(Dirichlet, ReducedStiffnessIsPositiveDefinite) {
  const auto p = problems::example3();
  const Mesh m = initial_mesh(p.domain, 2);
  const SparseMatrix k = apply_dirichlet(assemble_stiffness(m, p), m);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> val(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Vector v(static_cast<std::size_t>(k.rows()));
    for (double& x : v) x = val(rng);
    EXPECT_GT(bilinear(k, v, v), 0.0);
  }
}

#ifndef MLAFEM_ASSEMBLY_HPP
#define MLAFEM_ASSEMBLY_HPP

#include "errors.hpp"
#include "mesh.hpp"
#include "problem.hpp"
#include "quadrature.hpp"
#include "sparse.hpp"

#include <array>
#include <span>
#include <vector>

namespace mlafem {

using ElementMatrix = std::array<std::array<double, 3>, 3>;

/// P1 element matrix of a(u,v) = int A grad u . grad v + phi u v. Coefficients
/// are sampled at the edge midpoints (exact for constant data).
inline ElementMatrix element_stiffness(const ElementGeometry& g, const ProblemDef& problem) {
  SymMat2 mean_A{};
  std::array<double, 3> phi_q{};
  for (std::size_t q = 0; q < quadrature::midpoint_rule.size(); ++q) {
    const auto& qp = quadrature::midpoint_rule[q];
    const Point2 x = g.map(qp.bary[0], qp.bary[1], qp.bary[2]);
    mean_A = mean_A + qp.weight * problem.A(x);
    phi_q[q] = problem.potential(x);
  }
  ElementMatrix k{};
  for (int i = 0; i < 3; ++i) {
    const Vec2 flux = mean_A * g.grad_lambda[i];
    for (int j = 0; j < 3; ++j) {
      double reaction = 0.0;
      for (std::size_t q = 0; q < quadrature::midpoint_rule.size(); ++q) {
        const auto& qp = quadrature::midpoint_rule[q];
        reaction += qp.weight * phi_q[q] * qp.bary[i] * qp.bary[j];
      }
      k[i][j] = g.area * (dot(flux, g.grad_lambda[j]) + reaction);
    }
  }
  return k;
}

/// Exact P1 mass matrix: area/12 * [[2,1,1],[1,2,1],[1,1,2]].
inline ElementMatrix element_mass(double area) {
  ElementMatrix m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
  }
  return m;
}

namespace detail {
template <typename ElementFn>
SparseMatrix assemble_matrix(const Mesh& mesh, ElementFn&& element_fn) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMatrix local = element_fn(mesh.geometry(e));
    const auto& v = mesh.element_vertices(e);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.push_back({v[i], v[j], local[i][j]});
    }
  }
  return SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(t));
}
} // namespace detail

/// Global stiffness matrix over all vertices (no boundary conditions applied).
inline SparseMatrix assemble_stiffness(const Mesh& mesh, const ProblemDef& problem) {
  problem.validate();
  return detail::assemble_matrix(mesh, [&](const ElementGeometry& g) { return element_stiffness(g, problem); });
}

inline SparseMatrix assemble_mass(const Mesh& mesh) {
  return detail::assemble_matrix(mesh, [](const ElementGeometry& g) { return element_mass(g.area); });
}

/// Load vector (g, phi_i) for an analytic g, midpoint quadrature.
inline Vector assemble_load(const Mesh& mesh, const ScalarField& g) {
  Vector b(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto geo = mesh.geometry(e);
    const auto& v = mesh.element_vertices(e);
    for (const auto& qp : quadrature::midpoint_rule) {
      const double gx = g(geo.map(qp.bary[0], qp.bary[1], qp.bary[2]));
      for (int i = 0; i < 3; ++i) b[v[i]] += geo.area * qp.weight * gx * qp.bary[i];
    }
  }
  return b;
}

/// Load vector for a P1 function living on the same mesh: exactly M g.
inline Vector assemble_load(const Mesh& mesh, std::span<const double> g) {
  if (static_cast<int>(g.size()) != mesh.num_vertices()) {
    throw DimensionError("assemble_load: FE function has " + std::to_string(g.size()) + " values, mesh has " +
                         std::to_string(mesh.num_vertices()) + " vertices");
  }
  Vector b(g.size(), 0.0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double area = mesh.geometry(e).area;
    const auto& v = mesh.element_vertices(e);
    const double sum = g[v[0]] + g[v[1]] + g[v[2]];
    for (int i = 0; i < 3; ++i) b[v[i]] += area / 12.0 * (sum + g[v[i]]);
  }
  return b;
}

/// Homogeneous Dirichlet conditions by elimination: keeps the rows and columns
/// of the free (interior) dofs.
inline SparseMatrix apply_dirichlet(const SparseMatrix& a, const Mesh& mesh) {
  return a.principal_submatrix(mesh.free_dofs());
}

inline Vector apply_dirichlet(std::span<const double> v, const Mesh& mesh) {
  Vector r;
  r.reserve(mesh.free_dofs().size());
  for (int i : mesh.free_dofs()) r.push_back(v[i]);
  return r;
}

/// Re-expands a free-dof vector with zeros on the boundary.
inline Vector expand_dirichlet(std::span<const double> reduced, const Mesh& mesh) {
  if (reduced.size() != mesh.free_dofs().size()) throw DimensionError("expand_dirichlet: size mismatch");
  Vector full(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (std::size_t k = 0; k < reduced.size(); ++k) full[mesh.free_dofs()[k]] = reduced[k];
  return full;
}

/// u^T A v for a sparse symmetric form.
inline double bilinear(const SparseMatrix& a, std::span<const double> u, std::span<const double> v) {
  const Vector av = a * v;
  return dot(u, av);
}

} // namespace mlafem

#endif

#ifndef MLAFEM_ESTIMATOR_HPP
#define MLAFEM_ESTIMATOR_HPP

#include "dense.hpp"
#include "eigenpair.hpp"
#include "errors.hpp"
#include "mesh.hpp"
#include "problem.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace mlafem {

/// Per-element squared residual indicators
///   eta_T^2 = h_T^2 ||R_T||_T^2 + sum_{E in dT} h_E ||J_E||_E^2
/// aligned with the mesh's active element order.
struct IndicatorField {
  std::vector<double> eta_sq;
  std::vector<double> residual_part;
  std::vector<double> jump_part;
  double total = 0.0; // eta^2 over the whole domain

  [[nodiscard]] std::size_t size() const noexcept { return eta_sq.size(); }
  [[nodiscard]] double eta() const { return std::sqrt(total); }

  /// Elementwise sum, used to mark for several eigenpairs at once.
  IndicatorField& operator+=(const IndicatorField& o) {
    if (eta_sq.empty()) return *this = o;
    if (o.size() != size()) throw DimensionError("IndicatorField sum: sizes differ");
    for (std::size_t i = 0; i < size(); ++i) {
      eta_sq[i] += o.eta_sq[i];
      residual_part[i] += o.residual_part[i];
      jump_part[i] += o.jump_part[i];
    }
    total += o.total;
    return *this;
  }
};

/// Function that may be discontinuous across elements: value on element e at x.
using ElementFunction = std::function<double(int, Point2)>;

namespace detail {

inline std::array<double, 3> local_values(const Mesh& mesh, std::span<const double> u, int e) {
  const auto& v = mesh.element_vertices(e);
  return {u[v[0]], u[v[1]], u[v[2]]};
}

// Shared residual estimator: R_T = source + div(A grad u) - phi u, where for a
// P1 u the divergence reduces to divA . grad u.
inline IndicatorField residual_estimator(const Mesh& mesh, const ProblemDef& problem, std::span<const double> u,
                                         const ElementFunction& source) {
  problem.validate();
  if (static_cast<int>(u.size()) != mesh.num_vertices()) throw DimensionError("estimator: vector does not match mesh");
  const int ne = mesh.num_elements();
  IndicatorField out;
  out.eta_sq.assign(static_cast<std::size_t>(ne), 0.0);
  out.residual_part.assign(static_cast<std::size_t>(ne), 0.0);
  out.jump_part.assign(static_cast<std::size_t>(ne), 0.0);

  std::vector<Vec2> grads(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    const auto g = mesh.geometry(e);
    const auto ue = local_values(mesh, u, e);
    grads[e] = g.gradient(ue);
    double r2 = 0.0;
    for (const auto& qp : quadrature::midpoint_rule) {
      const Point2 x = g.map(qp.bary[0], qp.bary[1], qp.bary[2]);
      const double uq = qp.bary[0] * ue[0] + qp.bary[1] * ue[1] + qp.bary[2] * ue[2];
      const double r = source(e, x) + dot(problem.div_A(x), grads[e]) - problem.potential(x) * uq;
      r2 += qp.weight * r * r;
    }
    out.residual_part[e] = g.diameter * g.diameter * g.area * r2;
  }

  for (const Edge& edge : mesh.edges()) {
    if (edge.is_boundary()) continue;
    const Point2 a = mesh.point(edge.v[0]);
    const Point2 b = mesh.point(edge.v[1]);
    const double len = distance(a, b);
    const Vec2 nu{(b - a).y / len, -(b - a).x / len};
    const Vec2 dgrad = grads[edge.elements[0]] - grads[edge.elements[1]];
    double j2 = 0.0;
    for (const auto& gp : quadrature::gauss2_line) {
      const Point2 x = a + gp.t * (b - a);
      const double jump = dot(problem.A(x) * dgrad, nu);
      j2 += gp.weight * jump * jump;
    }
    const double contribution = len * len * j2; // h_E * ||J_E||^2_E
    out.jump_part[edge.elements[0]] += contribution;
    out.jump_part[edge.elements[1]] += contribution;
  }

  for (int e = 0; e < ne; ++e) {
    out.eta_sq[e] = out.residual_part[e] + out.jump_part[e];
    out.total += out.eta_sq[e];
  }
  return out;
}

inline ElementFunction p1_function(const Mesh& mesh, std::span<const double> u) {
  return [&mesh, u](int e, Point2 x) {
    const auto& v = mesh.element_vertices(e);
    const auto bc = barycentric(x, mesh.point(v[0]), mesh.point(v[1]), mesh.point(v[2]));
    return bc[0] * u[v[0]] + bc[1] * u[v[1]] + bc[2] * u[v[2]];
  };
}

} // namespace detail

/// Indicators for a discrete eigenpair: R_T = lambda u + div(A grad u) - phi u.
inline IndicatorField eigen_indicators(const Mesh& mesh, const ProblemDef& problem, const EigenPair& pair) {
  const auto u = detail::p1_function(mesh, pair.u);
  const double lambda = pair.lambda;
  return detail::residual_estimator(mesh, problem, pair.u, [&](int e, Point2 x) { return lambda * u(e, x); });
}

/// Indicators for a source problem with analytic right-hand side f.
inline IndicatorField bvp_indicators(const Mesh& mesh, const ProblemDef& problem, std::span<const double> u,
                                     const ScalarField& f) {
  return detail::residual_estimator(mesh, problem, u, [&](int, Point2 x) { return f(x); });
}

/// Indicators for a source problem whose right-hand side is a P1 function on the same mesh.
inline IndicatorField bvp_indicators(const Mesh& mesh, const ProblemDef& problem, std::span<const double> u,
                                     std::span<const double> f) {
  if (static_cast<int>(f.size()) != mesh.num_vertices()) throw DimensionError("bvp_indicators: f does not match mesh");
  return detail::residual_estimator(mesh, problem, u, detail::p1_function(mesh, f));
}

/// Element residual lambda u + div(A grad u) - phi u as an element function.
inline ElementFunction eigen_residual(const Mesh& mesh, const ProblemDef& problem, const EigenPair& pair) {
  return [&mesh, &problem, &pair](int e, Point2 x) {
    const auto g = mesh.geometry(e);
    const auto& v = mesh.element_vertices(e);
    const auto bc = barycentric(x, g.vertex[0], g.vertex[1], g.vertex[2]);
    const double ux = bc[0] * pair.u[v[0]] + bc[1] * pair.u[v[1]] + bc[2] * pair.u[v[2]];
    const Vec2 grad = g.gradient({pair.u[v[0]], pair.u[v[1]], pair.u[v[2]]});
    return pair.lambda * ux + dot(problem.div_A(x), grad) - problem.potential(x) * ux;
  };
}

/// Per-element data oscillation h_T^2 ||g - P_m g||_T^2, P_m the local L^2
/// projection onto polynomials of degree m.
struct OscillationField {
  std::vector<double> osc_sq;
  double total = 0.0; // osc^2

  [[nodiscard]] double osc() const { return std::sqrt(total); }
};

/// Data oscillation with a degree-4 quadrature. Supports m = 0, 1, 2.
inline OscillationField oscillation(const Mesh& mesh, const ElementFunction& g, int degree = 1) {
  if (degree < 0 || degree > 2) throw ConfigurationError("oscillation: projection degree must be 0, 1 or 2");
  const int nb = (degree + 1) * (degree + 2) / 2;
  // Monomials in two barycentric coordinates; the first nb span P_m.
  auto basis = [](const std::array<double, 3>& l) {
    return std::array<double, 6>{1.0, l[1], l[2], l[1] * l[1], l[1] * l[2], l[2] * l[2]};
  };
  OscillationField out;
  out.osc_sq.assign(static_cast<std::size_t>(mesh.num_elements()), 0.0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto geo = mesh.geometry(e);
    std::array<double, quadrature::degree4_rule.size()> gq{};
    DenseMatrix gram(nb, nb);
    Vector rhs(static_cast<std::size_t>(nb), 0.0);
    for (std::size_t q = 0; q < quadrature::degree4_rule.size(); ++q) {
      const auto& qp = quadrature::degree4_rule[q];
      gq[q] = g(e, geo.map(qp.bary[0], qp.bary[1], qp.bary[2]));
      const auto b = basis(qp.bary);
      for (int i = 0; i < nb; ++i) {
        rhs[i] += qp.weight * gq[q] * b[i];
        for (int j = 0; j < nb; ++j) gram(i, j) += qp.weight * b[i] * b[j];
      }
    }
    // Solve gram * c = rhs by Cholesky.
    const DenseMatrix l = cholesky(gram);
    Vector c(static_cast<std::size_t>(nb));
    for (int i = 0; i < nb; ++i) {
      double s = rhs[i];
      for (int k = 0; k < i; ++k) s -= l(i, k) * c[k];
      c[i] = s / l(i, i);
    }
    for (int i = nb - 1; i >= 0; --i) {
      double s = c[i];
      for (int k = i + 1; k < nb; ++k) s -= l(k, i) * c[k];
      c[i] = s / l(i, i);
    }
    double err2 = 0.0;
    for (std::size_t q = 0; q < quadrature::degree4_rule.size(); ++q) {
      const auto& qp = quadrature::degree4_rule[q];
      const auto b = basis(qp.bary);
      double proj = 0.0;
      for (int i = 0; i < nb; ++i) proj += c[i] * b[i];
      err2 += qp.weight * (gq[q] - proj) * (gq[q] - proj);
    }
    out.osc_sq[e] = geo.diameter * geo.diameter * geo.area * err2;
    out.total += out.osc_sq[e];
  }
  return out;
}

inline OscillationField oscillation(const Mesh& mesh, const ScalarField& g, int degree = 1) {
  return oscillation(mesh, ElementFunction([&g](int, Point2 x) { return g(x); }), degree);
}

} // namespace mlafem

#endif

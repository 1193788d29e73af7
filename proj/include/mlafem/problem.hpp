#ifndef MLAFEM_PROBLEM_HPP
#define MLAFEM_PROBLEM_HPP

#include "domain.hpp"
#include "errors.hpp"
#include "geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mlafem {

using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Vec2(Point2)>;
using TensorField = std::function<SymMat2(Point2)>;

struct ReferenceEigenvalue {
  double value = 0.0;
  std::string note;
};

/// Operator L u = -div(A grad u) + phi u on a polygonal domain with
/// homogeneous Dirichlet conditions.
struct ProblemDef {
  std::string name;
  TensorField A;
  /// Column divergences (d_x A_11 + d_y A_21, d_x A_12 + d_y A_22). May be
  /// empty only when A is constant.
  VectorField divA;
  ScalarField phi;
  bool constant_A = true;
  DomainDef domain;
  /// Cells per unit side used for the default initial mesh.
  int coarse_cells = 8;
  std::vector<ReferenceEigenvalue> reference_eigenvalues;

  [[nodiscard]] std::optional<double> reference(std::size_t i) const {
    if (i < reference_eigenvalues.size()) return reference_eigenvalues[i].value;
    return std::nullopt;
  }

  [[nodiscard]] Vec2 div_A(Point2 p) const { return divA ? divA(p) : Vec2{0.0, 0.0}; }
  [[nodiscard]] double potential(Point2 p) const { return phi ? phi(p) : 0.0; }

  void validate() const {
    if (!A) throw ConfigurationError("problem " + name + ": diffusion tensor A missing");
    if (!constant_A && !divA) throw ConfigurationError("problem " + name + ": non-constant A needs an analytic divA");
    domain.validate();
  }
};

/// Source problem L u = f with optional exact solution for error measurement.
struct SourceProblem {
  ProblemDef op;
  ScalarField f;
  ScalarField exact;
  VectorField exact_gradient;
};

} // namespace mlafem

#endif

#ifndef MLAFEM_PROBLEMS_HPP
#define MLAFEM_PROBLEMS_HPP

#include "domain.hpp"
#include "errors.hpp"
#include "problem.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace mlafem::problems {

using std::numbers::pi;

/// Harmonic oscillator -1/2 Lap u + 1/2 |x|^2 u = lambda u, truncated to (-5,5)^2.
inline ProblemDef example1() {
  ProblemDef p;
  p.name = "example1";
  p.A = [](Point2) { return SymMat2::identity(0.5); };
  p.phi = [](Point2 x) { return 0.5 * (x.x * x.x + x.y * x.y); };
  p.constant_A = true;
  p.domain = DomainDef::square(-5.0, 5.0);
  p.coarse_cells = 16;
  p.reference_eigenvalues = {
      {1.0, "exact on R^2; domain truncation changes it by O(e^-25)"},
  };
  return p;
}

/// Laplacian on the L-shape.
inline ProblemDef example2() {
  ProblemDef p;
  p.name = "example2";
  p.A = [](Point2) { return SymMat2::identity(); };
  p.constant_A = true;
  p.domain = DomainDef::l_shape();
  p.coarse_cells = 16;
  p.reference_eigenvalues = {
      {9.6397238440219, "published high-accuracy approximation, not analytic"},
  };
  return p;
}

/// Variable tensor A = I + v v^T, v = x - (1/2, 1/2), with phi = exp(v_1 v_2) on the L-shape.
inline ProblemDef example3() {
  ProblemDef p;
  p.name = "example3";
  p.A = [](Point2 x) {
    const double a = x.x - 0.5;
    const double b = x.y - 0.5;
    return SymMat2{1.0 + a * a, a * b, 1.0 + b * b};
  };
  p.divA = [](Point2 x) { return Vec2{3.0 * (x.x - 0.5), 3.0 * (x.y - 0.5)}; };
  p.phi = [](Point2 x) { return std::exp((x.x - 0.5) * (x.y - 0.5)); };
  p.constant_A = false;
  p.domain = DomainDef::l_shape();
  p.coarse_cells = 16;
  p.reference_eigenvalues = {
      {13.58258211870407, "published high-accuracy approximation, not analytic"},
  };
  return p;
}

/// Laplacian on the unit square: eigenvalues (m^2 + n^2) pi^2.
inline ProblemDef oracle_square() {
  ProblemDef p;
  p.name = "oracle_square";
  p.A = [](Point2) { return SymMat2::identity(); };
  p.constant_A = true;
  p.domain = DomainDef::square(0.0, 1.0);
  p.coarse_cells = 8;
  const double pi2 = pi * pi;
  p.reference_eigenvalues = {
      {2 * pi2, "analytic (1,1)"}, {5 * pi2, "analytic (1,2)"}, {5 * pi2, "analytic (2,1)"},
      {8 * pi2, "analytic (2,2)"}, {10 * pi2, "analytic (1,3)"},
  };
  return p;
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"oracle_square", "example1", "example2", "example3"};
  return n;
}

inline ProblemDef by_name(const std::string& name) {
  if (name == "oracle_square") return oracle_square();
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  throw ConfigurationError("unknown problem '" + name + "'");
}

/// -Lap u = 2 pi^2 sin(pi x) sin(pi y) on the unit square, u known.
inline SourceProblem manufactured_square() {
  SourceProblem s;
  s.op = oracle_square();
  s.op.name = "manufactured_square";
  s.f = [](Point2 x) { return 2 * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y); };
  s.exact = [](Point2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
  s.exact_gradient = [](Point2 x) {
    return Vec2{pi * std::cos(pi * x.x) * std::sin(pi * x.y), pi * std::sin(pi * x.x) * std::cos(pi * x.y)};
  };
  return s;
}

/// -Lap u = 1 on the L-shape; no closed-form solution.
inline SourceProblem l_shape_unit_load() {
  SourceProblem s;
  s.op = example2();
  s.op.name = "l_shape_unit_load";
  s.f = [](Point2) { return 1.0; };
  return s;
}

/// Source problem associated with a named eigenproblem for the BVP loop.
inline SourceProblem source_by_name(const std::string& name) {
  if (name == "oracle_square") return manufactured_square();
  if (name == "example2") return l_shape_unit_load();
  SourceProblem s;
  s.op = by_name(name);
  s.f = [](Point2) { return 1.0; };
  return s;
}

} // namespace mlafem::problems

#endif

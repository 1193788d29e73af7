#ifndef MLAFEM_CG_HPP
#define MLAFEM_CG_HPP

#include "errors.hpp"
#include "sparse.hpp"

#include <cmath>
#include <span>

namespace mlafem {

/// Work counters. The adaptive loops aggregate these per level so callers can
/// check where fine-mesh work goes.
struct OpCounters {
  long cg_solves = 0;
  long cg_iterations = 0;
  long eigen_sweeps = 0;     // outer iterations of the sparse eigensolver
  long dense_eigensolves = 0;

  OpCounters& operator+=(const OpCounters& o) {
    cg_solves += o.cg_solves;
    cg_iterations += o.cg_iterations;
    eigen_sweeps += o.eigen_sweeps;
    dense_eigensolves += o.dense_eigensolves;
    return *this;
  }
};

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Default iteration cap for an n x n system.
inline int default_cg_cap(int n) { return static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 500; }

/// Jacobi-preconditioned conjugate gradients for a symmetric positive definite
/// K. Stops when ||K x - b|| <= tol ||b|| (true residual). A non-empty x0 is
/// used as the starting guess; max_iter < 0 selects default_cg_cap.
inline CgResult cg_solve(const SparseMatrix& k, std::span<const double> b, double tol = 1e-10, int max_iter = -1,
                         std::span<const double> x0 = {}, OpCounters* counters = nullptr) {
  const int n = k.rows();
  if (k.cols() != n || static_cast<int>(b.size()) != n) throw DimensionError("cg_solve: system dimensions differ");
  if (!x0.empty() && static_cast<int>(x0.size()) != n) throw DimensionError("cg_solve: initial guess has wrong size");
  if (max_iter < 0) max_iter = default_cg_cap(n);
  if (counters) ++counters->cg_solves;

  CgResult res;
  res.x = x0.empty() ? Vector(static_cast<std::size_t>(n), 0.0) : Vector(x0.begin(), x0.end());
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.x.assign(static_cast<std::size_t>(n), 0.0);
    return res;
  }
  Vector inv_diag = k.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0)) throw Error("cg_solve: non-positive diagonal entry");
    d = 1.0 / d;
  }

  Vector r(b.begin(), b.end());
  Vector z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
  auto true_residual = [&] {
    k.multiply(res.x, q);
    for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
    return norm2(r);
  };

  double rnorm = true_residual();
  int it = 0;
  while (rnorm > tol * bnorm && it < max_iter) {
    // (Re)start from the current true residual.
    for (int i = 0; i < n; ++i) p[i] = z[i] = inv_diag[i] * r[i];
    double rz = dot(r, z);
    while (it < max_iter) {
      ++it;
      k.multiply(p, q);
      const double alpha = rz / dot(p, q);
      axpy(alpha, p, res.x);
      axpy(-alpha, q, r);
      rnorm = norm2(r);
      if (rnorm <= tol * bnorm) break;
      for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rnorm = true_residual();
  }
  res.iterations = it;
  res.relative_residual = rnorm / bnorm;
  if (counters) counters->cg_iterations += it;
  if (rnorm > tol * bnorm) throw NonconvergenceError("cg_solve did not converge", res.relative_residual, it);
  return res;
}

} // namespace mlafem

#endif

#ifndef MLAFEM_EIGENSOLVER_HPP
#define MLAFEM_EIGENSOLVER_HPP

#include "cg.hpp"
#include "dense.hpp"
#include "eigenpair.hpp"
#include "errors.hpp"
#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace mlafem {

struct SparseEigenOptions {
  double tol = 1e-8;         // ||K u - lambda M u||_{M^-1} <= tol * lambda
  double linear_tol = 1e-10; // inner CG tolerance
  int max_sweeps = 1000;
  int extra_vectors = 2;     // block size is q + extra_vectors
  unsigned seed = 20120501u; // fills the start block beyond the supplied guesses
};

namespace detail {

// M-orthonormalises the columns in place (two passes of modified Gram-Schmidt).
// Columns that collapse are replaced by fresh random vectors.
inline void m_orthonormalize(std::vector<Vector>& cols, const SparseMatrix& m, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (int attempt = 0;; ++attempt) {
      const double before = std::sqrt(std::max(0.0, dot(cols[j], m * cols[j])));
      for (int pass = 0; pass < 2; ++pass) {
        const Vector mv = m * cols[j];
        for (std::size_t i = 0; i < j; ++i) axpy(-dot(cols[i], mv), cols[i], cols[j]);
      }
      const double after = std::sqrt(std::max(0.0, dot(cols[j], m * cols[j])));
      if (after > 1e-10 * before && after > 0) {
        scale(1.0 / after, cols[j]);
        break;
      }
      if (attempt > 5) throw Error("m_orthonormalize: cannot complete basis");
      for (double& v : cols[j]) v = dist(rng);
    }
  }
}

} // namespace detail

/// The q smallest eigenpairs of K u = lambda M u for sparse symmetric
/// positive definite K and M (already reduced to free dofs).
///
/// Block inverse iteration (subspace iteration with shift 0) with a
/// Rayleigh-Ritz step after every sweep; each application of K^-1 is a CG
/// solve. `initial` supplies optional start vectors.
inline EigenSet sparse_smallest_eigs(const SparseMatrix& k, const SparseMatrix& m, int q,
                                     const SparseEigenOptions& opt = {}, std::span<const Vector> initial = {},
                                     OpCounters* counters = nullptr) {
  const int n = k.rows();
  if (k.cols() != n || m.rows() != n || m.cols() != n) throw DimensionError("sparse_smallest_eigs: pencil dimensions differ");
  if (q < 1 || q > n) throw DimensionError("sparse_smallest_eigs: need 1 <= q <= n");
  const int p = std::min(n, q + opt.extra_vectors);

  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Vector> x;
  for (const Vector& v : initial) {
    if (static_cast<int>(x.size()) == p) break;
    if (static_cast<int>(v.size()) != n) throw DimensionError("sparse_smallest_eigs: initial vector has wrong size");
    x.push_back(v);
  }
  while (static_cast<int>(x.size()) < p) {
    Vector v(static_cast<std::size_t>(n));
    for (double& e : v) e = dist(rng);
    x.push_back(std::move(v));
  }
  detail::m_orthonormalize(x, m, rng);

  std::vector<double> ritz(static_cast<std::size_t>(p), 0.0);
  bool have_ritz = false;
  double last_residual = INFINITY;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    if (counters) ++counters->eigen_sweeps;
    // Y = K^-1 M X
    std::vector<Vector> y(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      const Vector rhs = m * x[j];
      Vector guess;
      if (have_ritz && ritz[j] > 0) {
        guess = x[j];
        scale(1.0 / ritz[j], guess);
      }
      y[j] = cg_solve(k, rhs, opt.linear_tol, -1, guess, counters).x;
    }
    detail::m_orthonormalize(y, m, rng);

    // Rayleigh-Ritz on span(Y); Y is M-orthonormal so the projected pencil is (Y^T K Y, I).
    DenseMatrix kr(p, p);
    std::vector<Vector> ky(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) ky[j] = k * y[j];
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j <= i; ++j) kr(i, j) = kr(j, i) = 0.5 * (dot(y[i], ky[j]) + dot(y[j], ky[i]));
    }
    const EigenSet small = dense_sym_gen_eig(kr, DenseMatrix::identity(p));
    for (int j = 0; j < p; ++j) {
      Vector v(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < p; ++i) axpy(small[j].u[i], y[i], v);
      x[j] = std::move(v);
      ritz[j] = small[j].lambda;
    }
    have_ritz = true;

    bool converged = true;
    for (int j = 0; j < q && converged; ++j) {
      Vector r = k * x[j];
      axpy(-ritz[j], m * x[j], r);
      const double rn = norm2(r);
      double res_m_inv = 0.0;
      if (rn > 0) {
        const Vector w = cg_solve(m, r, 1e-6, -1, {}, nullptr).x;
        res_m_inv = std::sqrt(std::max(0.0, dot(r, w)));
      }
      last_residual = res_m_inv / std::abs(ritz[j]);
      converged = res_m_inv <= opt.tol * std::abs(ritz[j]);
    }
    if (converged) {
      EigenSet out;
      for (int j = 0; j < q; ++j) {
        Vector u = x[j];
        scale(1.0 / std::sqrt(dot(u, m * u)), u);
        fix_sign(u);
        out.pairs.push_back({ritz[j], std::move(u)});
      }
      return out;
    }
  }
  throw NonconvergenceError("sparse_smallest_eigs", last_residual, opt.max_sweeps);
}

} // namespace mlafem

#endif

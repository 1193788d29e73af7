#ifndef MLAFEM_DENSE_HPP
#define MLAFEM_DENSE_HPP

#include "eigenpair.hpp"
#include "errors.hpp"
#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace mlafem {

/// Row-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), value) {}

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(std::span<const double> d) {
    DenseMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  [[nodiscard]] Vector column(int j) const {
    Vector c(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  [[nodiscard]] Vector operator*(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_) throw DimensionError("DenseMatrix * vector: size mismatch");
    Vector y(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  [[nodiscard]] double max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < i; ++j) worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
    return worst;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Lower Cholesky factor L with B = L L^T. Throws ReductionError if B is not
/// numerically positive definite.
inline DenseMatrix cholesky(const DenseMatrix& b) {
  const int n = b.rows();
  if (b.cols() != n) throw DimensionError("cholesky: matrix not square");
  DenseMatrix l(n, n);
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(b(i, i)));
  for (int j = 0; j < n; ++j) {
    double d = b(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 1e-14 * max_diag)) {
      throw ReductionError("cholesky: pivot " + std::to_string(j) + " is " + std::to_string(d) + ", matrix not positive definite");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = b(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

namespace detail {

// Householder reduction of the symmetric matrix held in v to tridiagonal
// form T = Q^T A Q with Q = P_{n-1} ... P_1, P_s = I - u_s u_s^T / h_s acting
// on indices < s. On return row s of v holds u_s in its first s entries,
// d[s] = h_s, v(i, i) the diagonal of T and e[i] the entry T(i-1, i).
inline void householder_reduce(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = v.rows();
  for (int j = 0; j < n; ++j) d[j] = v(j, n - 1);
  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(j, i - 1);
        v(j, i) = 0.0;
        v(i, j) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;
      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(i, j) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(j, k) * d[k];
          e[k] += v(j, k) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(j, k) -= (f * e[k] + g * d[k]);
        d[j] = v(j, i - 1);
        v(j, i) = 0.0;
      }
    }
    d[i] = h;
  }
  e[0] = 0.0;
}

// Householder reduction with Q accumulated in v. v ends up holding Q
// transposed (row k of v is column k of Q) so that the inner loops run along
// rows. d receives the diagonal, e the subdiagonal (e[0] unused).
inline void householder_tridiagonalize(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e) {
  const int n = v.rows();
  householder_reduce(v, d, e);
  for (int i = 0; i < n - 1; ++i) {
    v(i, n - 1) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(i + 1, k) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(i + 1, k) * v(j, k);
        for (int k = 0; k <= i; ++k) v(j, k) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(i + 1, k) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(j, n - 1);
    v(j, n - 1) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iteration on the tridiagonal (d, e), rotating the rows of v
// (= columns of Q). With v == nullptr only eigenvalues are computed.
inline void implicit_ql(DenseMatrix* v, std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  double f = 0.0;
  double tst1 = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw NonconvergenceError("implicit QL", std::abs(e[l]), iter);
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (v) {
            double* vi = &(*v)(i, 0);
            double* vi1 = &(*v)(i + 1, 0);
            for (int k = 0; k < n; ++k) {
              h = vi1[k];
              vi1[k] = s * vi[k] + c * h;
              vi[k] = c * vi[k] - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

} // namespace detail

/// Eigen-decomposition of a symmetric matrix: eigenvalues ascending and
/// orthonormal eigenvectors as the columns of `vectors`.
struct SymmetricEigen {
  std::vector<double> values;
  DenseMatrix vectors;
};

inline SymmetricEigen symmetric_eigen(const DenseMatrix& a) {
  const int n = a.rows();
  if (a.cols() != n) throw DimensionError("symmetric_eigen: matrix not square");
  SymmetricEigen out{std::vector<double>(static_cast<std::size_t>(n)), DenseMatrix(n, n)};
  if (n == 0) return out;
  DenseMatrix v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(n));
  detail::householder_tridiagonalize(v, d, e);
  detail::implicit_ql(&v, d, e);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
  for (int k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(order[k], i);
  }
  return out;
}

namespace detail {

// Solves (T - shift I) x = b in place for the symmetric tridiagonal T with
// diagonal diag and off-diagonal off (off[i] = T(i-1, i)). Gaussian
// elimination with partial pivoting; tiny pivots are replaced by `tiny`.
inline void shifted_tridiagonal_solve(const std::vector<double>& diag, const std::vector<double>& off, double shift,
                                      double tiny, Vector& b) {
  const int n = static_cast<int>(diag.size());
  std::vector<double> dd(diag), dl(std::max(n - 1, 0)), du(std::max(n - 1, 0)), du2(std::max(n - 2, 0), 0.0);
  std::vector<char> swapped(std::max(n - 1, 0), 0);
  for (int i = 0; i < n; ++i) dd[i] -= shift;
  for (int i = 0; i + 1 < n; ++i) dl[i] = du[i] = off[i + 1];
  auto guard = [tiny](double x) { return std::abs(x) < tiny ? (x < 0 ? -tiny : tiny) : x; };
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(dd[i]) >= std::abs(dl[i])) {
      const double fact = dl[i] / guard(dd[i]);
      dl[i] = fact;
      dd[i + 1] -= fact * du[i];
    } else {
      const double fact = dd[i] / dl[i];
      dd[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = dd[i + 1];
      dd[i + 1] = temp - fact * dd[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (!swapped[i]) {
      b[i + 1] -= dl[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl[i] * b[i];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    if (i + 1 < n) s -= du[i] * b[i + 1];
    if (i + 2 < n) s -= du2[i] * b[i + 2];
    b[i] = s / guard(dd[i]);
  }
}

} // namespace detail

/// The `count` smallest eigenpairs of a symmetric matrix, ascending. Eigenvalues
/// of the tridiagonal form come from QL without vectors; the wanted vectors
/// from inverse iteration, mapped back through the Householder reflectors.
inline SymmetricEigen symmetric_eigen_smallest(const DenseMatrix& a, int count) {
  const int n = a.rows();
  if (a.cols() != n) throw DimensionError("symmetric_eigen_smallest: matrix not square");
  if (count < 0 || count > n) throw DimensionError("symmetric_eigen_smallest: bad count");
  SymmetricEigen out{std::vector<double>(static_cast<std::size_t>(count)), DenseMatrix(n, count)};
  if (n == 0 || count == 0) return out;
  DenseMatrix v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = 0.5 * (a(i, j) + a(j, i));
  }
  std::vector<double> h(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n));
  detail::householder_reduce(v, h, off);
  std::vector<double> diag(static_cast<std::size_t>(n));
  double tnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    diag[i] = v(i, i);
    tnorm = std::max(tnorm, std::abs(diag[i]) + std::abs(off[i]) + (i + 1 < n ? std::abs(off[i + 1]) : 0.0));
  }
  std::vector<double> values(diag), work(off);
  detail::implicit_ql(nullptr, values, work);
  std::sort(values.begin(), values.end());
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(tnorm, std::numeric_limits<double>::min());

  std::vector<Vector> z;
  for (int k = 0; k < count; ++k) {
    Vector x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 7.0 * i + 3.0 * k); // deterministic start
    for (int it = 0; it < 4; ++it) {
      detail::shifted_tridiagonal_solve(diag, off, values[k], tiny, x);
      for (int pass = 0; pass < 2; ++pass) {
        for (const Vector& w : z) axpy(-dot(w, x), w, x);
      }
      const double nx = norm2(x);
      if (!(nx > 0) || !std::isfinite(nx)) throw NonconvergenceError("inverse iteration", nx, it + 1);
      scale(1.0 / nx, x);
    }
    z.push_back(x);
    // Back to the original basis: x <- P_{n-1} ... P_1 x.
    for (int s = 1; s < n; ++s) {
      if (h[s] == 0.0) continue;
      const double* u = &v(s, 0);
      double g = 0.0;
      for (int i = 0; i < s; ++i) g += u[i] * x[i];
      g /= h[s];
      for (int i = 0; i < s; ++i) x[i] -= g * u[i];
    }
    out.values[k] = values[k];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = x[i];
  }
  return out;
}

namespace detail {

// Overwrites the rows of x with L^-1 x (forward substitution, row oriented).
inline void forward_substitute_rows(const DenseMatrix& l, DenseMatrix& x) {
  const int n = x.rows();
  const int m = x.cols();
  for (int i = 0; i < n; ++i) {
    double* xi = &x(i, 0);
    for (int k = 0; k < i; ++k) {
      const double f = l(i, k);
      if (f == 0.0) continue;
      const double* xk = &x(k, 0);
      for (int j = 0; j < m; ++j) xi[j] -= f * xk[j];
    }
    const double inv = 1.0 / l(i, i);
    for (int j = 0; j < m; ++j) xi[j] *= inv;
  }
}

} // namespace detail

/// Eigenpairs of the pencil A x = lambda B x (A symmetric, B symmetric
/// positive definite), ascending, B-orthonormal, sign-fixed. Uses the
/// Cholesky reduction B = L L^T to the standard problem L^-1 A L^-T.
/// `count` limits how many (smallest) eigenvectors are formed; -1 for all.
inline EigenSet dense_sym_gen_eig(const DenseMatrix& a, const DenseMatrix& b, int count = -1) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) throw DimensionError("dense_sym_gen_eig: pencil dimensions differ");
  if (count < 0 || count > n) count = n;
  const DenseMatrix l = cholesky(b);
  DenseMatrix x = a;
  detail::forward_substitute_rows(l, x); // L^-1 A
  DenseMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = x(j, i);
  }
  detail::forward_substitute_rows(l, c); // L^-1 (L^-1 A)^T = L^-1 A L^-T
  const SymmetricEigen se = count < n ? symmetric_eigen_smallest(c, count) : symmetric_eigen(c);
  EigenSet out;
  out.pairs.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    // Back substitution L^T z = y.
    Vector z(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      double s = se.vectors(i, k);
      for (int m = i + 1; m < n; ++m) s -= l(m, i) * z[m];
      z[i] = s / l(i, i);
    }
    const Vector bz = b * z;
    scale(1.0 / std::sqrt(dot(z, bz)), z);
    fix_sign(z);
    out.pairs.push_back({se.values[k], std::move(z)});
  }
  return out;
}

} // namespace mlafem

#endif

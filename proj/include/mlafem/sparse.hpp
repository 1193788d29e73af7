#ifndef MLAFEM_SPARSE_HPP
#define MLAFEM_SPARSE_HPP

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace mlafem {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: size mismatch " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed row storage. Symmetric operators keep both triangles so that
/// products need no special casing.
class SparseMatrix {
public:
  SparseMatrix() = default;

  /// Builds from (row, col, value) triplets; duplicates are summed.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size();) {
      const Triplet& t = triplets[k];
      if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
        throw DimensionError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                             ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      }
      double v = 0.0;
      std::size_t j = k;
      for (; j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col; ++j) {
        v += triplets[j].value;
      }
      m.col_idx_.push_back(t.col);
      m.values_.push_back(v);
      ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
      k = j;
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    return m;
  }

  static SparseMatrix identity(int n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
  }

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const noexcept { return values_.size(); }

  [[nodiscard]] std::span<const int> row_columns(int r) const {
    return {col_idx_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  [[nodiscard]] std::span<const double> row_values(int r) const {
    return {values_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }

  /// Entry (r, c), zero when not stored.
  [[nodiscard]] double operator()(int r, int c) const {
    const auto cols = row_columns(r);
    const auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
  }

  void multiply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
      throw DimensionError("SparseMatrix::multiply: dimension mismatch");
    }
    for (int r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
      y[r] = s;
    }
  }

  [[nodiscard]] Vector operator*(std::span<const double> x) const {
    Vector y(static_cast<std::size_t>(rows_));
    multiply(x, y);
    return y;
  }

  /// y = A^T x
  [[nodiscard]] Vector multiply_transpose(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != rows_) throw DimensionError("SparseMatrix::multiply_transpose: dimension mismatch");
    Vector y(static_cast<std::size_t>(cols_), 0.0);
    for (int r = 0; r < rows_; ++r) {
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += values_[k] * x[r];
    }
    return y;
  }

  [[nodiscard]] Vector diagonal() const {
    Vector d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
    for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = (*this)(r, r);
    return d;
  }

  /// Largest |A_ij - A_ji| over stored entries.
  [[nodiscard]] double asymmetry() const {
    double worst = 0.0;
    for (int r = 0; r < rows_; ++r) {
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        worst = std::max(worst, std::abs(values_[k] - (*this)(col_idx_[k], r)));
      }
    }
    return worst;
  }

  /// Principal submatrix on the given (sorted) index list.
  [[nodiscard]] SparseMatrix principal_submatrix(std::span<const int> keep) const {
    std::vector<int> map(static_cast<std::size_t>(cols_), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) map[keep[i]] = static_cast<int>(i);
    SparseMatrix m;
    m.rows_ = m.cols_ = static_cast<int>(keep.size());
    m.row_ptr_.assign(keep.size() + 1, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const int r = keep[i];
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const int c = map[col_idx_[k]];
        if (c < 0) continue;
        m.col_idx_.push_back(c);
        m.values_.push_back(values_[k]);
      }
      m.row_ptr_[i + 1] = static_cast<int>(m.col_idx_.size());
    }
    return m;
  }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

} // namespace mlafem

#endif

#ifndef MLAFEM_EIGENPAIR_HPP
#define MLAFEM_EIGENPAIR_HPP

#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mlafem {

/// Eigenvalue with its coefficient vector, normalised to unit length in the
/// mass (or B) inner product.
struct EigenPair {
  double lambda = 0.0;
  Vector u;
};

/// Pairs sorted ascending by eigenvalue.
struct EigenSet {
  std::vector<EigenPair> pairs;

  [[nodiscard]] std::size_t size() const noexcept { return pairs.size(); }
  [[nodiscard]] const EigenPair& operator[](std::size_t i) const { return pairs[i]; }
  [[nodiscard]] EigenPair& operator[](std::size_t i) { return pairs[i]; }

  [[nodiscard]] std::vector<double> eigenvalues() const {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.lambda);
    return v;
  }

  void sort() {
    std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
  }
};

/// Flips the sign of u so that its entry of largest magnitude is positive.
inline void fix_sign(Vector& u) {
  if (u.empty()) return;
  const auto it = std::max_element(u.begin(), u.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0) scale(-1.0, u);
}

} // namespace mlafem

#endif

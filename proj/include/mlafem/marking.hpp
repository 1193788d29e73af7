#ifndef MLAFEM_MARKING_HPP
#define MLAFEM_MARKING_HPP

#include "errors.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace mlafem {

/// Doerfler bulk marking: the smallest set of elements whose squared
/// indicators sum to at least theta times the total. Ties are broken by
/// element index. Returns element indices in selection order; empty when all
/// indicators vanish.
inline std::vector<int> dorfler_mark(std::span<const double> eta_sq, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigurationError("dorfler_mark: theta must lie in (0,1), got " + std::to_string(theta));
  std::vector<int> order(eta_sq.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta_sq[a] > eta_sq[b]; });
  double total = 0.0;
  for (int i : order) total += eta_sq[i];
  std::vector<int> marked;
  if (!(total > 0.0)) return marked;
  const double target = theta * total;
  double sum = 0.0;
  for (int i : order) {
    marked.push_back(i);
    sum += eta_sq[i];
    if (sum >= target) break;
  }
  return marked;
}

} // namespace mlafem

#endif

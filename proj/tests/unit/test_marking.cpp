#include "mlafem/marking.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace mlafem;

namespace {

double sum_of(const std::vector<double>& eta, const std::vector<int>& set) {
  double s = 0.0;
  for (int i : set) s += eta[i];
  return s;
}

} // namespace

TEST(Dorfler, PicksLargestFirst) {
  const std::vector<double> eta{4, 3, 2, 1};
  EXPECT_EQ(dorfler_mark(eta, 0.4), (std::vector<int>{0}));
  EXPECT_EQ(dorfler_mark(eta, 0.5), (std::vector<int>{0, 1}));
  EXPECT_EQ(dorfler_mark(eta, 0.75), (std::vector<int>{0, 1, 2}));
}

TEST(Dorfler, SingleElement) {
  EXPECT_EQ(dorfler_mark(std::vector<double>{2.5}, 0.3), (std::vector<int>{0}));
}

TEST(Dorfler, ThetaNearOneMarksEverything) {
  const std::vector<double> eta{1, 1, 1, 1, 1};
  EXPECT_EQ(dorfler_mark(eta, 0.999999).size(), 5u);
}

TEST(Dorfler, ZeroIndicatorsMarkNothing) {
  EXPECT_TRUE(dorfler_mark(std::vector<double>{0, 0, 0}, 0.5).empty());
  EXPECT_TRUE(dorfler_mark(std::vector<double>{}, 0.5).empty());
}

TEST(Dorfler, TiesBrokenByIndex) {
  EXPECT_EQ(dorfler_mark(std::vector<double>{1, 2, 2, 1}, 0.3), (std::vector<int>{1}));
}

TEST(Dorfler, InvalidThetaRejected) {
  const std::vector<double> eta{1, 2};
  for (double t : {0.0, 1.0, -0.1, 1.5}) EXPECT_THROW(dorfler_mark(eta, t), ConfigurationError);
}

TEST(Dorfler, MinimalCardinalityAgainstExhaustiveSearch) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::uniform_real_distribution<double> th(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = size(rng);
    std::vector<double> eta(static_cast<std::size_t>(n));
    for (double& e : eta) e = val(rng);
    const double theta = th(rng);
    const auto marked = dorfler_mark(eta, theta);
    double total = 0.0;
    for (double e : eta) total += e;
    EXPECT_GE(sum_of(eta, marked), theta * total);
    EXPECT_EQ(std::set<int>(marked.begin(), marked.end()).size(), marked.size());
    std::size_t best = static_cast<std::size_t>(n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double s = 0.0;
      std::size_t count = 0;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          s += eta[i];
          ++count;
        }
      }
      if (s >= theta * total) best = std::min(best, count);
    }
    EXPECT_EQ(marked.size(), best);
  }
}

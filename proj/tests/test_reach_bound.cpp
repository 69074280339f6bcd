#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "reachbound/reach_bound.hpp"
#include "reachbound/rng.hpp"

using namespace reachbound;

namespace {

PointCloud circle(std::size_t n) {
  PointCloud c(2);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    c.push_back({std::cos(a), std::sin(a)});
  }
  return c;
}

// Plain double loop, written independently of the library's scan.
double brute_bound(const PointCloud& c, double eps) {
  double best = kInfinity;
  std::vector<double> mid(c.dim());
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      midpoint(c[i], c[j], mid);
      double x = kInfinity;
      for (std::size_t k = 0; k < c.size(); ++k) x = std::min(x, distance(mid, c[k]));
      if (x < eps) continue;
      const double alpha = distance(c[i], c[j]);
      best = std::min(best, g(alpha, std::min(x - eps, alpha / 2)));
    }
  }
  return best;
}

}  // namespace

TEST(ReachBound, TwoPoints) {
  const auto c = PointCloud::from_rows({{-1, 0}, {1, 0}});
  const auto r = reach_upper_bound(c, 0.5);
  EXPECT_DOUBLE_EQ(r.value, 1.25);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->i, 0u);
  EXPECT_EQ(r.witness->j, 1u);
  EXPECT_DOUBLE_EQ(g(r.witness->alpha, r.witness->x - r.epsilon), r.value);
}

TEST(ReachBound, EmptyAdmissibleSet) {
  const auto c = PointCloud::from_rows({{-1, 0}, {1, 0}, {0, 0.5}});
  const auto r = reach_upper_bound(c, 5.0);
  EXPECT_EQ(r.value, kInfinity);
  EXPECT_TRUE(r.admissible_empty);
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_EQ(reach_upper_bound(PointCloud::from_rows({{1, 1}}), 0.0).value, kInfinity);
}

TEST(ReachBound, Preconditions) {
  const auto c = PointCloud::from_rows({{-1, 0}, {1, 0}});
  EXPECT_THROW(reach_upper_bound(c, -0.1), PreconditionError);
  EXPECT_THROW(reach_upper_bound(PointCloud(2), 0.1), PreconditionError);
}

TEST(ReachBound, Circle360) {
  const auto r = reach_upper_bound(circle(360), 0.009);
  EXPECT_GE(r.value, 1.0);
  EXPECT_LE(r.value, 1.01);
  EXPECT_EQ(r.value, reach_upper_bound(circle(360), 0.009, {false}).value);
}

TEST(ReachBound, PruningIsExact) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 1 + rng.below(4);
    const std::size_t n = 2 + rng.below(150);
    PointCloud c(d);
    std::vector<double> p(d);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& x : p) x = rng.uniform(-1.0, 1.0);
      c.push_back(p);
    }
    const double eps = rng.uniform(0.0, 0.1);
    const auto pruned = reach_upper_bound(c, eps);
    const auto full = reach_upper_bound(c, eps, {false, IndexMode::brute});
    ASSERT_EQ(pruned.value, full.value);
    ASSERT_EQ(pruned.witness, full.witness);
    ASSERT_EQ(full.pairs_examined, n * (n - 1) / 2);
    if (n <= 60) {
      ASSERT_EQ(full.value, brute_bound(c, eps));
    }
  }
}

TEST(ReachBound, NonDecreasingInEpsilon) {
  SplitMix64 rng(32);
  PointCloud c(2);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.0, 2 * std::numbers::pi);
    const double rad = 1.0 + rng.uniform(-0.05, 0.05);
    c.push_back({rad * std::cos(a), rad * std::sin(a)});
  }
  double prev = 0.0;
  for (double eps = 0.0; eps < 0.3; eps += 0.01) {
    const double v = reach_upper_bound(c, eps).value;
    EXPECT_GE(v, prev) << eps;
    prev = v;
  }
}

TEST(ReachBound, CircleConvergenceTrend) {
  double prev_excess = kInfinity;
  for (std::size_t n : {90u, 180u, 360u, 720u}) {
    const double eps = 2 * std::sin(std::numbers::pi / (2.0 * static_cast<double>(n)));
    const double v = reach_upper_bound(circle(n), eps).value;
    EXPECT_GE(v, 1.0);
    EXPECT_LT(v - 1.0, prev_excess);
    if (n >= 360) {
      EXPECT_LE(v - 1.0, 3 * std::sqrt(eps)) << n;
    }
    prev_excess = v - 1.0;
  }
}

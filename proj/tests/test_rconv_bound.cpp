#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "reachbound/rconv_bound.hpp"
#include "reachbound/rng.hpp"
#include "reachbound/synth.hpp"

using namespace reachbound;

namespace {

LabeledGrid holed_grid() {
  LabeledGrid g;
  g.phi = PointCloud(2);
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      g.phi.push_back({double(i), double(j)});
      g.inside.push_back(i == 5 && j == 5 ? 0 : 1);
    }
  }
  g.epsilon = 0.75;
  return g;
}

LabeledGrid line_grid() {
  LabeledGrid g;
  g.phi = PointCloud::from_rows({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  g.inside = {1, 1, 0, 0};
  g.epsilon = 0.5;
  return g;
}

LabeledGrid random_grid(SplitMix64& rng, std::size_t side) {
  LabeledGrid g;
  g.phi = PointCloud(2);
  std::vector<std::array<double, 3>> disks(1 + rng.below(3));
  for (auto& d : disks) d = {rng.uniform(3, 7), rng.uniform(3, 7), rng.uniform(0.8, 2.5)};
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      const double x = 10.0 * (i + rng.uniform(-0.2, 0.2)) / side;
      const double y = 10.0 * (j + rng.uniform(-0.2, 0.2)) / side;
      g.phi.push_back({x, y});
      bool in = false;
      for (const auto& d : disks) in = in || std::hypot(x - d[0], y - d[1]) <= d[2];
      g.inside.push_back(in);
    }
  }
  g.epsilon = 10.0 / side;
  return g;
}

}  // namespace

TEST(Rconv, CoveringRadius) {
  EXPECT_NEAR(covering_radius(1, 2), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(covering_radius(0.004, 3), 0.0034641016, 1e-9);
  EXPECT_DOUBLE_EQ(covering_radius(1, 1), 0.5);
  EXPECT_THROW(covering_radius(0, 2), PreconditionError);
}

TEST(Rconv, OffsetExamples) {
  const auto g = line_grid();
  EXPECT_EQ(discrete_offset(g, 1.0).mask, (std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_EQ(discrete_offset(g, -1.0).mask, (std::vector<std::uint8_t>{1, 0, 0, 0}));
  EXPECT_EQ(discrete_offset(g, 0.0).mask, g.inside);
  auto full = g;
  full.inside = {1, 1, 1, 1};
  EXPECT_EQ(discrete_offset(full, -3.0).mask, full.inside);
}

TEST(Rconv, OffsetMonotoneAndSemigroup) {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = random_grid(rng, 18);
    std::vector<double> radii;
    for (int k = -6; k <= 6; ++k) radii.push_back(0.37 * k);
    for (std::size_t a = 0; a + 1 < radii.size(); ++a) {
      const auto lo = discrete_offset(g, radii[a]).mask;
      const auto hi = discrete_offset(g, radii[a + 1]).mask;
      for (std::size_t i = 0; i < lo.size(); ++i) ASSERT_LE(lo[i], hi[i]);
    }
    for (double r : {0.3, 0.8, 1.4}) {
      for (double s : {0.2, 0.9}) {
        const auto rs = discrete_offset(g.phi, discrete_offset(g, r).mask, s).mask;
        const auto sum = discrete_offset(g, r + s).mask;
        for (std::size_t i = 0; i < rs.size(); ++i) ASSERT_LE(rs[i], sum[i]);
      }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      ASSERT_LE(discrete_offset(g, -0.5).mask[i], g.inside[i]);
      ASSERT_GE(discrete_offset(g, 0.5).mask[i], g.inside[i]);
    }
  }
}

TEST(Rconv, HoledGridViolations) {
  const auto g = holed_grid();
  const auto v = closing_violations(g, 2.0, 0.75);
  EXPECT_EQ(v.points, (std::vector<std::size_t>{60}));
  EXPECT_TRUE(closing_violations(g, 1.5, 0.75).points.empty());
  EXPECT_THROW(closing_violations(g, 0.75, 0.75), PreconditionError);
}

TEST(Rconv, HoledGridBound) {
  const auto g = holed_grid();
  const auto r = rconv_upper_bound(g, 0.75, 5.0);
  EXPECT_EQ(r.value, 1.75);
  EXPECT_EQ(r.witness, std::optional<std::size_t>(60));
  EXPECT_FALSE(r.window_limited);
  EXPECT_THROW(rconv_upper_bound(g, 0.75, 0.5), PreconditionError);
}

TEST(Rconv, AllInsideIsWindowLimited) {
  auto g = holed_grid();
  g.inside.assign(g.size(), 1);
  const auto r = rconv_upper_bound(g, 0.75, 5.0);
  EXPECT_EQ(r.value, kInfinity);
  EXPECT_TRUE(r.window_limited);
  g.inside.assign(g.size(), 0);
  EXPECT_THROW(rconv_upper_bound(g, 0.75, 5.0), PreconditionError);
}

TEST(Rconv, ViolationOnlyWhenBallCoversEverything) {
  // Two inside points flanking one outside point: any violation needs a
  // ball around the middle point that swallows the whole grid.
  LabeledGrid g;
  g.phi = PointCloud::from_rows({{0, 0}, {1, 0}, {2, 0}});
  g.inside = {1, 0, 1};
  const auto r = rconv_upper_bound(g, 0.1, 5.0);
  EXPECT_EQ(r.value, kInfinity);
  EXPECT_TRUE(r.window_limited);
  EXPECT_FALSE(closing_violations(g, 1.2, 0.1).points.empty());
}

TEST(Rconv, PruningIsExact) {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_grid(rng, 12 + rng.below(10));
    const double eps = g.epsilon;
    const auto a = rconv_upper_bound(g, eps, 4.0, true);
    const auto b = rconv_upper_bound(g, eps, 4.0, false);
    ASSERT_EQ(a.value, b.value);
    ASSERT_EQ(a.witness, b.witness);
    ASSERT_EQ(a.window_limited, b.window_limited);
    if (std::isfinite(a.value)) {
      // The infimum is attained; a relative nudge absorbs rounding in r +- eps.
      const auto v = closing_violations(g, a.value * (1 + 1e-12), eps);
      ASSERT_FALSE(v.points.empty());
      ASSERT_NE(std::find(v.points.begin(), v.points.end(), *a.witness), v.points.end());
      ASSERT_TRUE(closing_violations(g, std::max(eps + 1e-9, a.value - 1e-6), eps).points.empty() ||
                  a.value - 1e-6 <= eps);
    }
  }
}

TEST(Rconv, ConvexDiskHasNoViolations) {
  ShapeSpec s;
  s.kind = ShapeKind::disk;
  s.radius = 1.0;
  s.spacing = 0.1;
  s.window = 3.0;
  s.margin = 1.5;
  s.seed = 5;
  const auto g = generate(s).grid();
  const double eps = covering_radius(s.spacing, 2);
  for (double r = eps + 0.01; r <= 1.0; r += 0.05) {
    EXPECT_TRUE(closing_violations(g, r, eps).points.empty()) << r;
  }
}

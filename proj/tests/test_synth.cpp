#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "reachbound/beta_reach.hpp"
#include "reachbound/oracle.hpp"
#include "reachbound/synth.hpp"

using namespace reachbound;
using std::numbers::pi;

TEST(Synth, TwoRaysExample) {
  ShapeSpec s;
  s.kind = ShapeKind::two_rays;
  s.angle = pi / 2;
  s.length = 1.0;
  s.n = 3;
  const auto out = generate(s);
  EXPECT_EQ(out.cloud().size(), 5u);
  ASSERT_EQ(out.truth.profile_model.size(), 1u);
  EXPECT_NEAR(out.truth.profile_model[0].slope, 1.5, 1e-12);
  EXPECT_EQ(out.truth.profile_model[0].intercept, 0.0);
  EXPECT_NEAR(ground_truth_profile(s, 0.1), 0.15, 1e-12);
  EXPECT_EQ(out.truth.reach, 0.0);
}

TEST(Synth, ArcExample) {
  ShapeSpec s;
  s.kind = ShapeKind::arc;
  s.radius = 1.0;
  s.angle = pi;
  s.n = 3;
  const auto out = generate(s);
  const auto& c = out.cloud();
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0][0], 1.0, 1e-15);
  EXPECT_NEAR(c[1][1], 1.0, 1e-15);
  EXPECT_NEAR(c[2][0], -1.0, 1e-15);
  EXPECT_NEAR(c[2][1], 0.0, 1e-15);
  EXPECT_EQ(out.truth.reach, 1.0);
}

TEST(Synth, FullCircleHasNoDuplicate) {
  ShapeSpec s;
  s.kind = ShapeKind::arc;
  s.angle = 2 * pi;
  s.n = 8;
  const auto out = generate(s);
  EXPECT_EQ(out.cloud().size(), 8u);
  EXPECT_NEAR(out.truth.hausdorff_bound, 2 * std::sin(pi / 16), 1e-15);
}

TEST(Synth, ParaboloidLiesOnSurface) {
  ShapeSpec s;
  s.kind = ShapeKind::paraboloid;
  s.focal = 4.0;
  s.extent = 6.0;
  s.manifold_dim = 2;
  s.ambient_dim = 3;
  s.n = 1500;
  s.seed = 17;
  const auto out = generate(s);
  const auto& c = out.cloud();
  ASSERT_EQ(c.size(), 1500u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double lhs = c[i][0] * c[i][0] + c[i][1] * c[i][1];
    ASSERT_NEAR(lhs, 8.0 * c[i][2], 1e-9 * (1 + lhs));
    ASSERT_LE(std::sqrt(lhs), 6.0 + 1e-12);
  }
  EXPECT_NEAR(ground_truth_profile(s, 1.0), 4.5, 1e-12);
  EXPECT_GT(out.truth.hausdorff_bound, 0.0);
  EXPECT_LT(out.truth.hausdorff_bound, 1.5);
}

TEST(Synth, EmbeddingPreservesDistances) {
  ShapeSpec s;
  s.kind = ShapeKind::paraboloid;
  s.focal = 6.0;
  s.extent = 9.0;
  s.manifold_dim = 3;
  s.ambient_dim = 4;
  s.n = 50;
  s.seed = 3;
  const auto base = generate(s).cloud();
  s.ambient_dim = 7;
  const auto high = generate(s).cloud();
  ASSERT_EQ(high.dim(), 7u);
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      ASSERT_NEAR(distance(base[i], base[j]), distance(high[i], high[j]), 1e-9);
    }
  }
  const auto pb = profile(base, CloudOracle(base));
  const auto ph = profile(high, CloudOracle(high));
  for (double beta : {0.0, 0.5, 1.0, 2.0}) EXPECT_NEAR(pb(beta), ph(beta), 1e-7);
}

TEST(Synth, TwoSpheresTruth) {
  ShapeSpec s;
  s.kind = ShapeKind::two_spheres;
  s.radius = 2.0;
  s.center_gap = 12.0;
  s.manifold_dim = 3;
  s.ambient_dim = 4;
  s.n = 400;
  s.seed = 9;
  EXPECT_EQ(ground_truth_profile(s, 1.0), 2.0);
  EXPECT_EQ(ground_truth_profile(s, 3.0), 4.0);
  EXPECT_THROW(ground_truth_profile(s, 4.5), PreconditionError);
  const auto out = generate(s);
  const auto& c = out.cloud();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = std::hypot(c[i][0] - 6, c[i][1], c[i][2]);
    const double r1 = std::sqrt(a * a + c[i][3] * c[i][3]);
    const double b = std::hypot(c[i][0] + 6, c[i][1], c[i][2]);
    const double r2 = std::sqrt(b * b + c[i][3] * c[i][3]);
    ASSERT_NEAR(std::min(r1, r2), 2.0, 1e-12);
  }
  EXPECT_EQ(out.truth.reach, 2.0);
}

TEST(Synth, C2GraphTruth) {
  ShapeSpec s;
  s.kind = ShapeKind::c2_graph;
  s.h1 = 0.5;
  s.h2 = 0.0;
  s.n = 101;
  const auto out = generate(s);
  EXPECT_EQ(out.truth.reach, 1.0);
  EXPECT_NEAR(ground_truth_profile(s, 0.2), 1.1, 1e-12);
  EXPECT_LE(out.truth.reach, out.truth.rconv);
}

TEST(Synth, GridLabelsMatchMembership) {
  for (auto kind : {ShapeKind::set_U, ShapeKind::set_W, ShapeKind::disk}) {
    ShapeSpec s;
    s.kind = kind;
    s.spacing = 0.2;
    s.window = 3.0;
    s.margin = 2.0;
    s.seed = 12;
    const auto out = generate(s);
    const auto& g = out.grid();
    EXPECT_NEAR(g.epsilon, 0.2 / std::sqrt(2.0), 1e-15);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.phi[i][0], y = g.phi[i][1];
      bool member = std::abs(x) <= 3 && std::abs(y) <= 3;
      if (kind == ShapeKind::set_U) member = member && y <= x * x / 2;
      if (kind == ShapeKind::set_W) member = member && std::abs(y) >= x * x / 2 + 1;
      if (kind == ShapeKind::disk) member = member && x * x + y * y <= 1;
      ASSERT_EQ(g.inside[i], member ? 1 : 0);
      inside += member;
      ASSERT_LE(std::max(std::abs(x), std::abs(y)), 5.0);
    }
    EXPECT_GT(inside, 0u);
    // Lattice fills the padded square: count is close to its area over a^2.
    EXPECT_NEAR(static_cast<double>(g.size()), 100.0 / 0.04, 0.05 * 2500);
    EXPECT_LE(out.truth.reach, out.truth.rconv);
  }
}

TEST(Synth, Deterministic) {
  for (auto kind : {ShapeKind::paraboloid, ShapeKind::two_spheres, ShapeKind::set_U}) {
    ShapeSpec s;
    s.kind = kind;
    s.n = 200;
    s.ambient_dim = 4;
    s.manifold_dim = 2;
    s.spacing = 0.3;
    s.seed = 77;
    const auto a = generate(s);
    const auto b = generate(s);
    EXPECT_EQ(a.data, b.data);
    s.seed = 78;
    EXPECT_NE(a.data, generate(s).data);
  }
}

TEST(Synth, InvalidSpecs) {
  ShapeSpec s;
  s.kind = ShapeKind::two_rays;
  s.angle = pi;
  EXPECT_THROW(generate(s), PreconditionError);
  s.kind = ShapeKind::paraboloid;
  s.manifold_dim = 3;
  s.ambient_dim = 3;
  EXPECT_THROW(generate(s), PreconditionError);
  s.kind = ShapeKind::set_U;
  s.spacing = 0;
  EXPECT_THROW(generate(s), PreconditionError);
  s.kind = ShapeKind::set_U;
  s.spacing = 0.1;
  EXPECT_THROW(ground_truth_profile(s, 0.1), PreconditionError);
  EXPECT_THROW(parse_shape_kind("torus"), PreconditionError);
  EXPECT_EQ(parse_shape_kind("set_W"), ShapeKind::set_W);
}

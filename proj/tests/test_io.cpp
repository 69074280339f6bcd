#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reachbound/io.hpp"
#include "reachbound/oracle.hpp"
#include "reachbound/rng.hpp"
#include "reachbound/svg.hpp"
#include "reachbound/synth.hpp"

using namespace reachbound;

TEST(Io, CloudParsing) {
  std::istringstream in("# header\n1, 2 3\n\n4 5 6 # trailing\n1 2 3\n");
  const auto c = read_cloud(in);
  EXPECT_EQ(c, PointCloud::from_rows({{1, 2, 3}, {4, 5, 6}}));
  std::istringstream bad("1 2\n3\n");
  EXPECT_THROW(read_cloud(bad), FormatError);
  std::istringstream junk("1 x\n");
  EXPECT_THROW(read_cloud(junk), FormatError);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(read_cloud(empty), FormatError);
}

TEST(Io, CloudRoundTrip) {
  SplitMix64 rng(1);
  PointCloud c(4);
  std::vector<double> p(4);
  for (int i = 0; i < 100; ++i) {
    for (auto& x : p) x = rng.normal() * 1e3 + rng.uniform() * 1e-7;
    c.push_back(p);
  }
  std::stringstream ss;
  write_cloud(ss, c);
  EXPECT_EQ(read_cloud(ss), c);
}

TEST(Io, GridRoundTripAndConflicts) {
  ShapeSpec s;
  s.kind = ShapeKind::set_W;
  s.spacing = 0.35;
  s.margin = 1.0;
  auto g = generate(s).grid();
  std::stringstream ss;
  write_grid(ss, g);
  const auto back = read_grid(ss, g.epsilon);
  EXPECT_EQ(back, g);
  std::istringstream dup("0 0 1\n0 0 1\n1 0 0\n");
  EXPECT_EQ(read_grid(dup).size(), 2u);
  std::istringstream conflict("0 0 1\n0 0 0\n");
  EXPECT_THROW(read_grid(conflict), FormatError);
  std::istringstream badlabel("0 0 2\n");
  EXPECT_THROW(read_grid(badlabel), FormatError);
}

TEST(Io, ProfileRoundTrip) {
  SplitMix64 rng(2);
  PointCloud c(3);
  for (int i = 0; i < 80; ++i) c.push_back({rng.normal(), rng.normal(), rng.normal()});
  for (double horizon : {kInfinity, 0.4}) {
    const auto p = profile(c, CloudOracle(c), {horizon, true});
    std::stringstream ss;
    write_profile_csv(ss, p);
    const std::string text = ss.str();
    EXPECT_NE(text.find("beta,value\n"), std::string::npos);
    EXPECT_NE(text.find(",inf\n"), std::string::npos);
    EXPECT_EQ(read_profile_csv(ss), p);
  }
  std::istringstream bad("b,v\n0,1\n");
  EXPECT_THROW(read_profile_csv(bad), FormatError);
}

TEST(Io, OffFanTriangulation) {
  std::istringstream in(
      "OFF\n# square and a triangle\n5 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n4 0 1 2 3\n3 0 1 4\n");
  const auto m = read_off(in);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(distance_to_mesh(m, std::vector<double>{0.5, 0.5, -2}), 2.0);
  std::stringstream out;
  write_off(out, m);
  const auto again = read_off(out);
  EXPECT_EQ(again.triangles(), m.triangles());
  std::istringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
  EXPECT_THROW(read_off(bad), PreconditionError);
}

TEST(Io, JsonShapes) {
  const auto r = reach_upper_bound(PointCloud::from_rows({{-1, 0}, {1, 0}}), 0.5);
  const auto j = to_json(r);
  EXPECT_EQ(j["bound"], 1.25);
  EXPECT_EQ(j["witness_i"], 0);
  EXPECT_EQ(j["witness_j"], 1);
  const auto none = to_json(reach_upper_bound(PointCloud::from_rows({{-1, 0}, {1, 0}}), 3.0));
  EXPECT_EQ(none["bound"], "inf");
  EXPECT_FALSE(none.contains("witness_i"));
  RconvBoundResult rc;
  rc.window_limited = true;
  rc.r_max = 2;
  const auto jr = to_json(rc);
  EXPECT_EQ(jr["bound"], "inf");
  EXPECT_TRUE(jr["witness"].is_null());
  EXPECT_EQ(jr["window_limited"], true);
}

TEST(Svg, ProfileStepPlot) {
  const BetaReachProfile one({{0.0, 1.0}}, 1.0);
  const std::string s = render_profile_svg(one);
  EXPECT_EQ(s, render_profile_svg(one));
  EXPECT_NE(s.find("<polyline"), std::string::npos);
  // One breakpoint: a single horizontal segment (two vertices at one height).
  const auto pts = s.substr(s.find("points=\"") + 8);
  std::istringstream ss(pts.substr(0, pts.find('"')));
  std::vector<std::string> v;
  for (std::string t; ss >> t;) v.push_back(t);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].substr(v[0].find(',')), v[1].substr(v[1].find(',')));
}

TEST(Svg, EmptyInputWritesNothing) {
  const auto path = std::filesystem::temp_directory_path() / "reachbound_empty.svg";
  std::filesystem::remove(path);
  EXPECT_THROW(save_profile_svg(path.string(), BetaReachProfile()), PreconditionError);
  EXPECT_FALSE(std::filesystem::exists(path));
  EXPECT_THROW(save_errorbar_svg(path.string(), {}, "t", "x", "y"), PreconditionError);
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(Svg, ErrorbarPlot) {
  ErrorSeries s{"rconv", {2, 4, 8}, {2.7, 1.9, 1.5}, {2.5, 1.8, 1.45}, {2.9, 2.0, 1.55}};
  const std::string a = render_errorbar_svg({s}, "U", "n", "bound");
  EXPECT_EQ(a, render_errorbar_svg({s}, "U", "n", "bound"));
  std::size_t circles = 0;
  for (std::size_t p = a.find("<circle"); p != std::string::npos; p = a.find("<circle", p + 1)) ++circles;
  EXPECT_EQ(circles, 3u);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "reachbound/beta_reach.hpp"
#include "reachbound/geometry.hpp"
#include "reachbound/point_cloud.hpp"

namespace reachbound {

/// Points with vertical error bars, drawn as one series.
struct ErrorSeries {
  std::string label;
  std::vector<double> x, y, lo, hi;
};

namespace svg {

inline constexpr double kWidth = 640, kHeight = 420;
inline constexpr double kLeft = 60, kRight = 20, kTop = 30, kBottom = 50;

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  bool log_x = false;

  double px(double x) const {
    const double a = log_x ? std::log(x) : x, lo = log_x ? std::log(x0) : x0,
                 hi = log_x ? std::log(x1) : x1;
    return kLeft + (a - lo) / (hi - lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline Frame padded(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double dy = (y1 - y0) * 0.05;
  return {x0, x1, y0 - dy, y1 + dy};
}

inline std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         "<text x=\"" + num(kWidth / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  const double bx = kHeight - kBottom;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(bx) + "\" x2=\"" + num(kWidth - kRight) +
       "\" y2=\"" + num(bx) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
       num(bx) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = f.log_x ? f.x0 * std::pow(f.x1 / f.x0, k / 4.0) : f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * k / 4.0;
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(bx + 16) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + num(xv) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.py(yv) + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + num(yv) + "</text>\n";
  }
  s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + escape(xlabel) + "</text>\n";
  s += "<text x=\"14\" y=\"" + num((kTop + bx) / 2) + "\" font-size=\"12\" transform=\"rotate(-90 14 " +
       num((kTop + bx) / 2) + ")\" text-anchor=\"middle\">" + escape(ylabel) + "</text>\n";
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace svg

/// Step plot of a profile over [0, support end]; one horizontal segment per
/// breakpoint joined by vertical risers.
inline std::string render_profile_svg(const BetaReachProfile& p, const std::string& title = "beta-reach profile") {
  if (p.empty()) throw PreconditionError("render_profile_svg: empty profile");
  const auto& bps = p.breakpoints();
  const double end = std::max(p.support_end(), bps.back().beta);
  double vmin = kInfinity, vmax = -kInfinity;
  for (const auto& b : bps) {
    vmin = std::min(vmin, b.value);
    vmax = std::max(vmax, b.value);
  }
  const svg::Frame f = svg::padded(0.0, end > 0.0 ? end : 1.0, vmin, vmax);
  std::string s = svg::header(title) + svg::axes(f, "beta", "reach_beta");
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const double a = bps[k].beta;
    const double b = k + 1 < bps.size() ? bps[k + 1].beta : end;
    s += svg::num(f.px(a)) + "," + svg::num(f.py(bps[k].value)) + " " + svg::num(f.px(b)) + "," +
         svg::num(f.py(bps[k].value)) + " ";
  }
  s += "\"/>\n</svg>\n";
  return s;
}

/// Mean-and-interval plot against a log-scaled x axis (sample-size index).
inline std::string render_errorbar_svg(const std::vector<ErrorSeries>& series,
                                       const std::string& title, const std::string& xlabel,
                                       const std::string& ylabel) {
  double x0 = kInfinity, x1 = -kInfinity, y0 = kInfinity, y1 = -kInfinity;
  std::size_t points = 0;
  for (const auto& se : series) {
    for (std::size_t k = 0; k < se.x.size(); ++k) {
      if (!std::isfinite(se.y[k])) continue;
      ++points;
      x0 = std::min(x0, se.x[k]);
      x1 = std::max(x1, se.x[k]);
      y0 = std::min({y0, se.lo[k], se.y[k]});
      y1 = std::max({y1, se.hi[k], se.y[k]});
    }
  }
  if (points == 0) throw PreconditionError("render_errorbar_svg: no finite points");
  svg::Frame f = svg::padded(x0, x1, y0, y1);
  if (x0 > 0.0 && x1 > x0) {
    f.x0 = x0 / 1.1;
    f.x1 = x1 * 1.1;
    f.log_x = true;
  }
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::string s = svg::header(title) + svg::axes(f, xlabel, ylabel);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& se = series[i];
    const std::string c = colours[i % 4];
    for (std::size_t k = 0; k < se.x.size(); ++k) {
      if (!std::isfinite(se.y[k])) continue;
      const double x = f.px(se.x[k]);
      s += "<line x1=\"" + svg::num(x) + "\" y1=\"" + svg::num(f.py(se.lo[k])) + "\" x2=\"" +
           svg::num(x) + "\" y2=\"" + svg::num(f.py(se.hi[k])) + "\" stroke=\"" + c + "\"/>\n";
      s += "<circle cx=\"" + svg::num(x) + "\" cy=\"" + svg::num(f.py(se.y[k])) +
           "\" r=\"3\" fill=\"" + c + "\"/>\n";
    }
    s += "<text x=\"" + svg::num(svg::kWidth - svg::kRight - 4) + "\" y=\"" +
         svg::num(svg::kTop + 14 * (i + 1)) + "\" text-anchor=\"end\" font-size=\"11\" fill=\"" + c +
         "\">" + svg::escape(se.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

/// Scatter of the first two coordinates. `highlight` (same length as the
/// cloud, or empty) picks points drawn in the accent colour.
inline std::string render_points_svg(const PointCloud& cloud, const std::vector<std::uint8_t>& highlight,
                                     const std::string& title) {
  if (cloud.empty()) throw PreconditionError("render_points_svg: empty cloud");
  if (!highlight.empty() && highlight.size() != cloud.size()) {
    throw PreconditionError("render_points_svg: highlight size != point count");
  }
  auto coord = [&](std::size_t i, std::size_t k) { return k < cloud.dim() ? cloud[i][k] : 0.0; };
  double x0 = kInfinity, x1 = -kInfinity, y0 = kInfinity, y1 = -kInfinity;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    x0 = std::min(x0, coord(i, 0));
    x1 = std::max(x1, coord(i, 0));
    y0 = std::min(y0, coord(i, 1));
    y1 = std::max(y1, coord(i, 1));
  }
  const svg::Frame f = svg::padded(x0, x1, y0, y1);
  std::string s = svg::header(title) + svg::axes(f, "x0", "x1");
  // Plain points first so highlighted ones stay visible on top.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const bool hot = !highlight.empty() && highlight[i];
      if (hot != (pass == 1)) continue;
      s += "<circle cx=\"" + svg::num(f.px(coord(i, 0))) + "\" cy=\"" + svg::num(f.py(coord(i, 1))) +
           "\" r=\"" + (hot ? "2.5" : "1.5") + "\" fill=\"" + (hot ? "#d62728" : "#7f7f7f") + "\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

/// Renders first, so nothing is written when the input is rejected.
inline void save_profile_svg(const std::string& path, const BetaReachProfile& p,
                             const std::string& title = "beta-reach profile") {
  const std::string content = render_profile_svg(p, title);
  svg::write_file(path, content);
}

inline void save_points_svg(const std::string& path, const PointCloud& cloud,
                            const std::vector<std::uint8_t>& highlight, const std::string& title) {
  const std::string content = render_points_svg(cloud, highlight, title);
  svg::write_file(path, content);
}

inline void save_errorbar_svg(const std::string& path, const std::vector<ErrorSeries>& series,
                              const std::string& title, const std::string& xlabel,
                              const std::string& ylabel) {
  const std::string content = render_errorbar_svg(series, title, xlabel, ylabel);
  svg::write_file(path, content);
}

}  // namespace reachbound

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachbound/io.hpp"
#include "reachbound/rconv_bound.hpp"
#include "reachbound/reach_bound.hpp"
#include "reachbound/synth.hpp"

namespace reachbound {

/// A bound fell below the known truth; the bound or its inputs are wrong.
class SoundnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ExperimentRow {
  ShapeKind set_kind = ShapeKind::set_U;
  int n = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  double rconv_bound = kInfinity;
  double reach_bound = kInfinity;
  double epsilon_rconv = 0.0;
  double epsilon_reach = 0.0;
  bool window_limited = false;
  double runtime_s = 0.0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
};

struct ConvergenceConfig {
  ShapeKind set_kind = ShapeKind::set_U;
  std::vector<int> n_list{2, 3, 4, 6, 8};
  int reps = 20;
  std::uint64_t base_seed = 1;
  double window = 3.0;
  double margin = 4.5;
  double r_max = 4.0;
  /// Reach-bound epsilon as a multiple of the lattice spacing.
  double epsilon_scale = std::sqrt(1.25);
  double truth = 1.0;
};

/// Lattice spacing used for resolution index n.
inline double lattice_spacing(int n) { return 0.7 / static_cast<double>(n); }

/// Bounds for one lattice realisation; `index` fixes the seed (base_seed + index).
inline ExperimentRow run_replication(const ConvergenceConfig& cfg, int n, int replication,
                                     std::size_t index) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRow row;
  row.set_kind = cfg.set_kind;
  row.n = n;
  row.replication = replication;
  row.seed = cfg.base_seed + index;

  ShapeSpec spec;
  spec.kind = cfg.set_kind;
  spec.spacing = lattice_spacing(n);
  spec.window = cfg.window;
  spec.margin = cfg.margin;
  spec.seed = row.seed;
  const auto sample = generate(spec);
  const LabeledGrid& grid = sample.grid();

  row.epsilon_rconv = covering_radius(spec.spacing, 2);
  const auto rc = rconv_upper_bound(grid, row.epsilon_rconv, cfg.r_max);
  row.rconv_bound = rc.value;
  row.window_limited = rc.window_limited;

  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.inside[i]) ids.push_back(i);
  }
  row.epsilon_reach = cfg.epsilon_scale * spec.spacing;
  row.reach_bound = reach_upper_bound(grid.phi.select(ids), row.epsilon_reach).value;
  row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (double b : {row.rconv_bound, row.reach_bound}) {
    if (b < cfg.truth) {
      throw SoundnessError("bound " + format_number(b) + " below truth " + format_number(cfg.truth) +
                           " for " + std::string(to_string(cfg.set_kind)) + " n=" +
                           std::to_string(n) + " seed=" + std::to_string(row.seed));
    }
  }
  return row;
}

/// Rows ordered by (n, replication); row k uses seed base_seed + k.
inline ExperimentTable run_convergence(const ConvergenceConfig& cfg) {
  if (cfg.n_list.empty()) throw PreconditionError("run_convergence: empty n list");
  if (cfg.reps < 1) throw PreconditionError("run_convergence: reps must be >= 1");
  if (!is_grid_kind(cfg.set_kind) || cfg.set_kind == ShapeKind::disk) {
    throw PreconditionError("run_convergence: set kind must be set_U or set_W");
  }
  for (int n : cfg.n_list) {
    if (n < 1) throw PreconditionError("run_convergence: n must be >= 1");
  }
  ExperimentTable table;
  std::size_t index = 0;
  for (int n : cfg.n_list) {
    for (int r = 0; r < cfg.reps; ++r) table.rows.push_back(run_replication(cfg, n, r, index++));
  }
  return table;
}

enum class BoundColumn { rconv, reach };

inline double column_value(const ExperimentRow& r, BoundColumn c) {
  return c == BoundColumn::rconv ? r.rconv_bound : r.reach_bound;
}

struct ColumnSummary {
  int n;
  std::size_t count;
  double mean, sd, ci_lo, ci_hi;  // normal-approximation 95% interval of the mean
};

inline std::vector<ColumnSummary> summarize(const ExperimentTable& t, BoundColumn c) {
  std::map<int, std::vector<double>> by_n;
  for (const auto& r : t.rows) by_n[r.n].push_back(column_value(r, c));
  std::vector<ColumnSummary> out;
  for (const auto& [n, v] : by_n) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
    out.push_back({n, v.size(), mean, sd, mean - half, mean + half});
  }
  return out;
}

/// mean - truth ~ C * n^(-p), fitted by least squares on logs.
struct RateFit {
  double coefficient = 0.0;  // C
  double exponent = 0.0;     // p
  double truth = 0.0;
  std::size_t points = 0;
};

inline RateFit rate_fit(const std::vector<std::pair<double, double>>& n_mean, double truth) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, m] : n_mean) {
    if (std::isfinite(m) && m > truth && n > 0) pts.emplace_back(std::log(n), std::log(m - truth));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return a.first == b.first; }),
            pts.end());
  if (pts.size() < 3) throw PreconditionError("rate_fit: need >= 3 distinct n with mean > truth");
  const double m = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = sxy / sxx;
  return {std::exp(my - slope * mx), -slope, truth, pts.size()};
}

inline RateFit rate_fit(const ExperimentTable& t, BoundColumn c, double truth) {
  std::vector<std::pair<double, double>> nm;
  for (const auto& s : summarize(t, c)) nm.emplace_back(static_cast<double>(s.n), s.mean);
  return rate_fit(nm, truth);
}

/// CSV of the table. Timings are wall-clock and vary between runs, so they
/// are only written on request.
inline void write_experiment_csv(std::ostream& out, const ExperimentTable& t,
                                 bool include_runtime = false) {
  out << "set_kind,n,replication,seed,rconv_bound,reach_bound,epsilon_rconv,epsilon_reach,"
         "window_limited";
  if (include_runtime) out << ",runtime_s";
  out << '\n';
  for (const auto& r : t.rows) {
    out << to_string(r.set_kind) << ',' << r.n << ',' << r.replication << ',' << r.seed << ','
        << format_number(r.rconv_bound) << ',' << format_number(r.reach_bound) << ','
        << format_number(r.epsilon_rconv) << ',' << format_number(r.epsilon_reach) << ','
        << (r.window_limited ? 1 : 0);
    if (include_runtime) out << ',' << format_number(r.runtime_s);
    out << '\n';
  }
}

}  // namespace reachbound

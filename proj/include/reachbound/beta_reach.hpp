#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reachbound/geometry.hpp"
#include "reachbound/oracle.hpp"
#include "reachbound/parallel.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/spatial_index.hpp"

namespace reachbound {

/// One unordered pair of sample points and the cap radius of its midpoint.
struct PairRecord {
  std::uint32_t i = 0, j = 0;  // i < j
  double alpha = 0.0;          // |a_j - a_i|
  double x = 0.0;              // oracle distance of the midpoint
  double gval = kInfinity;     // g(alpha, min(x, alpha/2))
  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

/// Non-decreasing step function beta -> reach_beta of a finite sample.
///
/// Breakpoint k holds on (beta_k, beta_{k+1}]; the first breakpoint is at 0
/// and also covers beta = 0. The value at a breakpoint's right end includes
/// the pair that generates it. Beyond support_end() the value is +inf.
/// A profile built with a finite horizon is exact only on [0, horizon].
class BetaReachProfile {
 public:
  struct Breakpoint {
    double beta;
    double value;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  BetaReachProfile() = default;

  /// Validates the step-function invariants.
  BetaReachProfile(std::vector<Breakpoint> breakpoints, double support_end,
                   double horizon = kInfinity)
      : breakpoints_(std::move(breakpoints)), support_end_(support_end), horizon_(horizon) {
    if (!breakpoints_.empty() && breakpoints_.front().beta != 0.0) {
      throw PreconditionError("profile: first breakpoint must be at beta = 0");
    }
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
      if (!(breakpoints_[k].beta > breakpoints_[k - 1].beta)) {
        throw PreconditionError("profile: breakpoints must be strictly increasing");
      }
      if (breakpoints_[k].value < breakpoints_[k - 1].value) {
        throw PreconditionError("profile: values must be non-decreasing");
      }
    }
    if (!breakpoints_.empty() && support_end_ < breakpoints_.back().beta) {
      throw PreconditionError("profile: support ends before the last breakpoint");
    }
  }

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double support_end() const { return support_end_; }
  double horizon() const { return horizon_; }
  bool empty() const { return breakpoints_.empty(); }

  /// Profile value at beta >= 0.
  double operator()(double beta) const {
    if (!(beta >= 0.0)) throw PreconditionError("profile: beta must be >= 0");
    if (beta > horizon_) {
      throw PreconditionError("profile: beta " + std::to_string(beta) + " beyond horizon " +
                              std::to_string(horizon_));
    }
    if (breakpoints_.empty() || beta > support_end_) return kInfinity;
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), beta,
                               [](const Breakpoint& b, double v) { return b.beta < v; });
    const auto k = static_cast<std::size_t>(it - breakpoints_.begin());
    return breakpoints_[k == 0 ? 0 : k - 1].value;
  }

  /// Builds the profile of a set of (x, g) samples; exact on [0, horizon].
  static BetaReachProfile from_samples(std::vector<std::pair<double, double>> xg,
                                       double horizon = kInfinity) {
    auto stairs = staircase(std::move(xg));  // x descending, g strictly decreasing
    std::vector<Breakpoint> bps;
    double support_end = 0.0;
    if (!stairs.empty()) {
      support_end = stairs.front().first;
      bps.reserve(stairs.size());
      double start = 0.0;
      for (auto it = stairs.rbegin(); it != stairs.rend(); ++it) {
        if (start >= horizon && start > 0.0) break;
        bps.push_back({start, it->second});
        start = it->first;
      }
    }
    if (support_end > horizon) support_end = horizon;
    return BetaReachProfile(std::move(bps), support_end, horizon);
  }

  /// Reduces samples to the pairs that can define the profile: sorted by x
  /// descending, each kept only if its g is strictly below every g at larger
  /// or equal x. Infinite g values never survive.
  static std::vector<std::pair<double, double>> staircase(std::vector<std::pair<double, double>> xg) {
    std::sort(xg.begin(), xg.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    std::vector<std::pair<double, double>> out;
    double running = kInfinity;
    for (const auto& s : xg) {
      if (s.second < running) {
        running = s.second;
        out.push_back(s);
      }
    }
    return out;
  }

  friend bool operator==(const BetaReachProfile&, const BetaReachProfile&) = default;

 private:
  std::vector<Breakpoint> breakpoints_;
  double support_end_ = 0.0;
  double horizon_ = kInfinity;
};

/// profile_query: the value of a computed profile at beta.
inline double profile_query(const BetaReachProfile& p, double beta) { return p(beta); }

struct ProfileOptions {
  /// The profile is exact on [0, beta_max]; values beyond are not computed.
  double beta_max = kInfinity;
  /// Skip pairs that provably cannot change the profile on [0, beta_max].
  bool prune = true;
};

namespace detail {

template <DistanceOracle Oracle>
void check_oracle_dim(const PointCloud& cloud, const Oracle& oracle) {
  if (cloud.dim() != oracle.dim()) {
    throw PreconditionError("oracle dimension " + std::to_string(oracle.dim()) +
                            " != cloud dimension " + std::to_string(cloud.dim()));
  }
}

inline std::uint64_t pair_count(std::size_t n) {
  return static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
}

// Rough sample spacing: median nearest-neighbour distance over <= 64 points.
inline double typical_spacing(const PointCloud& cloud, const SpatialIndex& index) {
  const std::size_t n = cloud.size();
  if (n < 2) return 0.0;
  const double start = cloud.bounding_diagonal() / static_cast<double>(n);
  std::vector<double> d;
  const std::size_t step = std::max<std::size_t>(1, n / 64);
  for (std::size_t i = 0; i < n; i += step) {
    for (double r = start; r < kInfinity; r *= 2.0) {
      const auto nb = index.within(cloud[i], r);
      if (nb.size() >= 2) {
        d.push_back(nb[1].distance);
        break;
      }
    }
  }
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return d[d.size() / 2];
}

}  // namespace detail

/// Every unordered pair with its midpoint distance; O(n^2) records.
template <DistanceOracle Oracle>
std::vector<PairRecord> pair_records(const PointCloud& cloud, const Oracle& oracle) {
  detail::check_oracle_dim(cloud, oracle);
  const std::size_t n = cloud.size();
  std::vector<PairRecord> out;
  out.reserve(detail::pair_count(n));
  std::vector<double> mid(cloud.dim());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double alpha = distance(cloud[i], cloud[j]);
      midpoint(cloud[i], cloud[j], mid);
      const double x = oracle.distance(mid, i);
      out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), alpha, x,
                     g(alpha, std::min(x, alpha / 2.0))});
    }
  }
  return out;
}

/// beta-reach of the sample: the smallest g over pairs whose midpoint lies at
/// oracle distance >= beta; +inf if no pair qualifies. Direct O(n^2) scan.
template <DistanceOracle Oracle>
double beta_reach_at(const PointCloud& cloud, const Oracle& oracle, double beta) {
  detail::check_oracle_dim(cloud, oracle);
  if (!(beta >= 0.0)) throw PreconditionError("beta_reach_at: beta must be >= 0");
  const std::size_t n = cloud.size();
  double best = kInfinity;
  std::vector<double> mid(cloud.dim());
  const double floor = beta * (1.0 - 1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double alpha = distance(cloud[i], cloud[j]);
      if (alpha / 2.0 >= best) continue;  // g >= alpha/2
      midpoint(cloud[i], cloud[j], mid);
      const auto x = oracle.distance_unless_below(mid, floor, i);
      if (!x || *x < beta) continue;
      best = std::min(best, g(alpha, std::min(*x, alpha / 2.0)));
    }
  }
  return best;
}

/// Exact beta-reach profile of a finite sample against a distance oracle.
///
/// Unpruned, every pair is evaluated. With pruning and a finite beta_max,
/// pairs are visited in rings of growing chord length alpha; a pair is skipped
/// once alpha/2 exceeds T = min{g : x >= beta_max} (since g >= alpha/2), or
/// once its midpoint is known to satisfy x <= g_inv(alpha, T). Neither can
/// change the profile on [0, beta_max]. Deterministic for any thread count.
template <DistanceOracle Oracle>
BetaReachProfile profile(const PointCloud& cloud, const Oracle& oracle,
                         const ProfileOptions& options = {}) {
  detail::check_oracle_dim(cloud, oracle);
  if (!(options.beta_max > 0.0)) throw PreconditionError("profile: beta_max must be > 0");
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();
  using Samples = std::vector<std::pair<double, double>>;

  if (!options.prune || std::isinf(options.beta_max) || n < 3) {
    const std::size_t grain = 8;
    std::vector<Samples> per_chunk((n + grain - 1) / grain);
    parallel_chunks(n, grain, [&](std::size_t begin, std::size_t end, unsigned) {
      Samples local;
      std::vector<double> mid(dim);
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double alpha = distance(cloud[i], cloud[j]);
          midpoint(cloud[i], cloud[j], mid);
          const double x = oracle.distance(mid, i);
          const double gv = g(alpha, std::min(x, alpha / 2.0));
          if (std::isfinite(gv)) local.emplace_back(x, gv);
        }
      }
      per_chunk[begin / grain] = BetaReachProfile::staircase(std::move(local));
    });
    Samples all;
    for (auto& s : per_chunk) all.insert(all.end(), s.begin(), s.end());
    return BetaReachProfile::from_samples(std::move(all), options.beta_max);
  }

  const SpatialIndex neighbours(cloud);
  const double beta_max = options.beta_max;
  const double diameter = cloud.bounding_diagonal();
  std::atomic<double> threshold{kInfinity};
  double inner = 0.0;
  double outer = std::max(2.0 * beta_max, 4.0 * detail::typical_spacing(cloud, neighbours));
  Samples all;
  for (;;) {
    const bool last_ring = outer >= diameter;
    const std::size_t grain = 16;
    std::vector<Samples> per_chunk((n + grain - 1) / grain);
    parallel_chunks(n, grain, [&](std::size_t begin, std::size_t end, unsigned) {
      Samples local;
      std::vector<double> mid(dim);
      for (std::size_t i = begin; i < end; ++i) {
        const auto ring = last_ring ? neighbours.within(cloud[i], kInfinity)
                                    : neighbours.within(cloud[i], outer);
        for (const Neighbor& nb : ring) {
          if (nb.id <= i || nb.distance <= inner) continue;
          const double alpha = nb.distance;
          const double t = threshold.load(std::memory_order_relaxed);
          if (alpha / 2.0 > t) break;  // ring is sorted by distance
          const double floor = std::isfinite(t) ? g_inv(alpha, t) * (1.0 - 1e-9) : -1.0;
          midpoint(cloud[i], cloud[nb.id], mid);
          const auto x = oracle.distance_unless_below(mid, floor, i);
          if (!x) continue;
          const double gv = g(alpha, std::min(*x, alpha / 2.0));
          if (!std::isfinite(gv)) continue;
          local.emplace_back(*x, gv);
          if (*x >= beta_max) atomic_min(threshold, gv);
        }
      }
      per_chunk[begin / grain] = BetaReachProfile::staircase(std::move(local));
    });
    for (auto& s : per_chunk) all.insert(all.end(), s.begin(), s.end());
    all = BetaReachProfile::staircase(std::move(all));
    if (last_ring || outer / 2.0 >= threshold.load()) break;
    inner = outer;
    outer *= 2.0;
  }
  return BetaReachProfile::from_samples(std::move(all), beta_max);
}

/// Least-squares line through a profile over a beta window.
struct ProfileFit {
  double beta_lo = 0.0, beta_hi = 0.0;
  double intercept = 0.0;  // reach estimate (beta -> 0 extrapolation)
  double slope = 0.0;      // empirical proxy for the profile's first-order growth
  double rms_residual = 0.0;
  std::size_t samples = 0;
  std::string weighting = "equal-per-breakpoint";
};

/// Ordinary least squares over the breakpoints inside [beta_lo, beta_hi]
/// together with the window endpoints, each sample weighted equally.
inline ProfileFit fit_profile(const BetaReachProfile& p, double beta_lo, double beta_hi) {
  if (!(beta_lo < beta_hi) || beta_lo < 0.0) {
    throw PreconditionError("fit_profile: need 0 <= beta_lo < beta_hi");
  }
  std::vector<std::pair<double, double>> pts;
  const auto add = [&](double b, double v) {
    if (!std::isfinite(v)) return;
    if (!pts.empty() && pts.back().first == b) return;
    pts.emplace_back(b, v);
  };
  add(beta_lo, p(beta_lo));
  for (const auto& bp : p.breakpoints()) {
    if (bp.beta > beta_lo && bp.beta < beta_hi) add(bp.beta, bp.value);
  }
  add(beta_hi, p(beta_hi));
  // Window endpoints can coincide with breakpoints; keep the breakpoint value.
  for (const auto& bp : p.breakpoints()) {
    for (auto& s : pts) {
      if (s.first == bp.beta) s.second = bp.value;
    }
  }
  if (pts.size() < 2) throw PreconditionError("fit_profile: fewer than 2 finite samples in window");
  const double m = static_cast<double>(pts.size());
  double sb = 0.0, sv = 0.0;
  for (const auto& [b, v] : pts) {
    sb += b;
    sv += v;
  }
  const double mb = sb / m, mv = sv / m;
  double sbb = 0.0, sbv = 0.0;
  for (const auto& [b, v] : pts) {
    sbb += (b - mb) * (b - mb);
    sbv += (b - mb) * (v - mv);
  }
  ProfileFit fit;
  fit.beta_lo = beta_lo;
  fit.beta_hi = beta_hi;
  fit.slope = sbv / sbb;
  fit.intercept = mv - fit.slope * mb;
  double ss = 0.0;
  for (const auto& [b, v] : pts) {
    const double r = v - (fit.intercept + fit.slope * b);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / m);
  fit.samples = pts.size();
  return fit;
}

}  // namespace reachbound

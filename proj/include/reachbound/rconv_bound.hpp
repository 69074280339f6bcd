#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "reachbound/geometry.hpp"
#include "reachbound/parallel.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/spatial_index.hpp"

namespace reachbound {

/// Sample locations phi with a membership label per point.
struct LabeledGrid {
  PointCloud phi;
  std::vector<std::uint8_t> inside;  // 1 = in A
  double epsilon = 0.0;              // covering radius of phi

  std::size_t size() const { return phi.size(); }
  std::size_t inside_count() const {
    return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), 1));
  }

  void validate() const {
    if (phi.empty()) throw PreconditionError("grid: no sample points");
    if (inside.size() != phi.size()) throw PreconditionError("grid: label count != point count");
    for (auto v : inside) {
      if (v > 1) throw PreconditionError("grid: labels must be 0 or 1");
    }
  }

  friend bool operator==(const LabeledGrid&, const LabeledGrid&) = default;
};

/// Result of a discrete dilation (r >= 0) or erosion (r < 0).
struct OffsetMask {
  double r = 0.0;
  std::vector<std::uint8_t> mask;
  std::size_t count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  }
};

/// Outside-labeled points recaptured by the closing at radius r.
struct ViolationSet {
  double r = 0.0;
  double epsilon = 0.0;
  std::vector<std::size_t> points;
};

struct RconvBoundResult {
  double value = kInfinity;
  double epsilon = 0.0;
  double r_max = 0.0;
  std::optional<std::size_t> witness;  // an outside point of phi
  /// Violations exist only where the ball around q covers all of phi, so
  /// they reflect the sampling window rather than the set.
  bool window_limited = false;
  std::size_t candidates_examined = 0;
};

/// Covering radius of the cubic lattice with spacing a in R^d: a*sqrt(d)/2.
inline double covering_radius(double spacing, int d) {
  if (!(spacing > 0.0)) throw PreconditionError("covering_radius: spacing must be > 0");
  if (d < 1) throw PreconditionError("covering_radius: dimension must be >= 1");
  return spacing * std::sqrt(static_cast<double>(d)) / 2.0;
}

namespace detail {

// Distance from every point of phi to the points selected by `mask`
// (+inf when the selection is empty).
inline std::vector<double> distances_to_subset(const PointCloud& phi,
                                               const std::vector<std::uint8_t>& mask,
                                               std::uint8_t want) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] == want) ids.push_back(i);
  }
  std::vector<double> out(phi.size(), kInfinity);
  if (ids.empty()) return out;
  const SpatialIndex index(phi.select(ids));
  parallel_chunks(phi.size(), 256, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = mask[i] == want ? 0.0 : index.nearest(phi[i]).distance;
    }
  });
  return out;
}

}  // namespace detail

/// Offset of an arbitrary subset of phi computed within phi:
/// r >= 0 gives {p : dist(p, S) <= r}; r < 0 gives {a in S : dist(a, phi \ S) > -r}.
inline OffsetMask discrete_offset(const PointCloud& phi, const std::vector<std::uint8_t>& subset,
                                  double r) {
  if (subset.size() != phi.size()) throw PreconditionError("offset: mask size != point count");
  OffsetMask out{r, std::vector<std::uint8_t>(phi.size(), 0)};
  if (r >= 0.0) {
    const auto d = detail::distances_to_subset(phi, subset, 1);
    for (std::size_t i = 0; i < d.size(); ++i) out.mask[i] = d[i] <= r ? 1 : 0;
  } else {
    const auto d = detail::distances_to_subset(phi, subset, 0);
    for (std::size_t i = 0; i < d.size(); ++i) out.mask[i] = subset[i] && d[i] > -r ? 1 : 0;
  }
  return out;
}

inline OffsetMask discrete_offset(const LabeledGrid& grid, double r) {
  grid.validate();
  return discrete_offset(grid.phi, grid.inside, r);
}

/// Outside points q such that every p in phi with |p - q| <= r + eps has
/// dist(p, inside) <= r - eps. A nonempty set certifies rconv(A) <= r.
inline ViolationSet closing_violations(const LabeledGrid& grid, double r, double epsilon) {
  grid.validate();
  if (!(epsilon >= 0.0)) throw PreconditionError("closing_violations: epsilon must be >= 0");
  if (!(r > epsilon)) throw PreconditionError("closing_violations: need r > epsilon");
  ViolationSet out{r, epsilon, {}};
  const auto delta = detail::distances_to_subset(grid.phi, grid.inside, 1);
  const SpatialIndex index(grid.phi);
  const double level = r - epsilon;
  std::vector<std::uint8_t> flagged(grid.size(), 0);
  parallel_chunks(grid.size(), 64, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t q = begin; q < end; ++q) {
      if (grid.inside[q] || delta[q] > level) continue;
      const bool ok = index.visit_within(grid.phi[q], r + epsilon,
                                         [&](const Neighbor& nb) { return delta[nb.id] <= level; });
      flagged[q] = ok ? 1 : 0;
    }
  });
  for (std::size_t q = 0; q < flagged.size(); ++q) {
    if (flagged[q]) out.points.push_back(q);
  }
  return out;
}

namespace detail {

struct SweepOutcome {
  double value = kInfinity;
  bool window_limited = false;  // first feasible interval is the one covering all of phi
};

// Smallest r in (eps, limit] at which q violates, given q's neighbours sorted
// by distance. `complete` says the neighbour list is all of phi; otherwise the
// next unseen distance is known to exceed limit + eps.
inline SweepOutcome sweep_point(const std::vector<Neighbor>& nbs, const std::vector<double>& delta,
                                double epsilon, double limit, bool complete) {
  SweepOutcome out;
  double running_max = 0.0;
  std::size_t k = 0;
  while (k < nbs.size()) {
    const double d = nbs[k].distance;
    std::size_t end = k;
    while (end < nbs.size() && nbs[end].distance == d) {
      running_max = std::max(running_max, delta[nbs[end].id]);
      ++end;
    }
    const double lower = std::max(d - epsilon, running_max + epsilon);
    if (lower > limit) return out;  // lower only grows from here
    if (end == nbs.size()) {
      if (complete) {
        out.value = lower;
        out.window_limited = true;
      } else {
        out.value = lower;
      }
      return out;
    }
    if (lower < nbs[end].distance - epsilon) {
      out.value = lower;
      return out;
    }
    k = end;
  }
  return out;
}

}  // namespace detail

/// inf{ r in (eps, r_max] : closing_violations(grid, r, eps) is nonempty }.
///
/// For each outside q the violation condition only changes where the ball of
/// radius r + eps gains points, so sweeping q's neighbours by distance with a
/// running maximum of dist(p, inside) gives q's exact infimum. Candidates are
/// visited in order of dist(q, inside) and the scan stops once that alone
/// exceeds the best value. Violations whose ball must cover all of phi are
/// reported only through window_limited. Ties go to the lowest point id.
inline RconvBoundResult rconv_upper_bound(const LabeledGrid& grid, double epsilon, double r_max,
                                          bool prune = true) {
  grid.validate();
  if (!(epsilon >= 0.0)) throw PreconditionError("rconv_upper_bound: epsilon must be >= 0");
  if (!(r_max > epsilon)) throw PreconditionError("rconv_upper_bound: need r_max > epsilon");
  if (grid.inside_count() == 0) throw PreconditionError("rconv_upper_bound: no inside points");
  RconvBoundResult result;
  result.epsilon = epsilon;
  result.r_max = r_max;

  const std::size_t n = grid.size();
  const auto delta = detail::distances_to_subset(grid.phi, grid.inside, 1);
  std::vector<std::size_t> order;
  for (std::size_t q = 0; q < n; ++q) {
    if (!grid.inside[q] && delta[q] + epsilon <= r_max) order.push_back(q);
  }
  if (order.empty()) {
    result.window_limited = grid.inside_count() == n;
    return result;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return delta[a] < delta[b] || (delta[a] == delta[b] && a < b);
  });
  const SpatialIndex index(grid.phi);

  struct Local {
    double value = kInfinity;
    std::size_t id = 0;
    bool limited = false;
    std::size_t examined = 0;
  };
  std::atomic<double> best{kInfinity};
  std::atomic<bool> stop{false};
  const std::size_t grain = 32;
  std::vector<Local> per_chunk((order.size() + grain - 1) / grain);
  parallel_chunks(order.size(), grain, [&](std::size_t begin, std::size_t end, unsigned) {
    Local local;
    for (std::size_t s = begin; s < end; ++s) {
      const std::size_t q = order[s];
      const double b = best.load(std::memory_order_relaxed);
      if (prune && (stop.load(std::memory_order_relaxed) || delta[q] + epsilon > b)) {
        stop.store(true, std::memory_order_relaxed);
        break;
      }
      const double limit = prune ? std::min(r_max, b) : r_max;
      const auto nbs = index.within(grid.phi[q], prune ? limit + epsilon : kInfinity);
      ++local.examined;
      const auto sw = detail::sweep_point(nbs, delta, epsilon, limit, nbs.size() == n);
      if (!std::isfinite(sw.value)) continue;
      if (sw.window_limited) {
        local.limited = true;
        continue;
      }
      if (sw.value < local.value || (sw.value == local.value && q < local.id)) {
        local.value = sw.value;
        local.id = q;
      }
      atomic_min(best, sw.value);
    }
    per_chunk[begin / grain] = local;
  });

  bool limited = false;
  for (const auto& c : per_chunk) {
    result.candidates_examined += c.examined;
    limited = limited || c.limited;
    if (c.value < result.value ||
        (c.value == result.value && std::isfinite(c.value) && c.id < *result.witness)) {
      result.value = c.value;
      result.witness = c.id;
    }
  }
  result.window_limited = !std::isfinite(result.value) && limited;
  return result;
}

}  // namespace reachbound

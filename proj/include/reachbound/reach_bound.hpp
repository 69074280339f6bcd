#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "reachbound/beta_reach.hpp"
#include "reachbound/geometry.hpp"
#include "reachbound/parallel.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/spatial_index.hpp"

namespace reachbound {

/// Upper bound on reach(A) from a sample within Hausdorff distance epsilon of A.
struct ReachBoundResult {
  double value = kInfinity;
  double epsilon = 0.0;
  /// Pair attaining the infimum; value == g(alpha, x - epsilon) for it.
  std::optional<PairRecord> witness;
  std::uint64_t pairs_examined = 0;  // midpoint distance evaluated
  std::uint64_t pairs_pruned = 0;
  /// No pair has x >= epsilon: epsilon exceeds the sample's resolution.
  bool admissible_empty = false;
};

struct ReachBoundOptions {
  bool prune = true;
  IndexMode index_mode = IndexMode::automatic;
};

namespace detail {

struct PairCandidate {
  double value = kInfinity;
  std::uint32_t i = 0, j = 0;
  double alpha = 0.0, x = 0.0;
  bool found = false;
  // Lexicographic (value, i, j) ordering makes the witness schedule-independent.
  bool better_than(const PairCandidate& o) const {
    if (!found) return false;
    if (!o.found) return true;
    if (value != o.value) return value < o.value;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
};

inline void consider_pair(PairCandidate& best, double value, std::size_t i, std::size_t j,
                          double alpha, double x) {
  PairCandidate c{value, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), alpha, x,
                  true};
  if (c.better_than(best)) best = c;
}

// Cheapest lower bound on g(alpha, x - eps) given x <= alpha/2.
inline double reach_pair_lower_bound(double alpha, double eps) {
  const double h = alpha / 2.0 - eps;
  if (h <= 0.0) return kInfinity;
  return g(alpha, h);
}

}  // namespace detail

/// inf{ g(|a2 - a1|, x - eps) : a1, a2 in the cloud, x = dist(midpoint, cloud) >= eps }.
///
/// With pruning, pairs are visited in rings of growing alpha and skipped when
/// g(alpha, alpha/2 - eps) already exceeds the running best, or when the
/// midpoint has a sample point strictly closer than eps + g_inv(alpha, best).
/// The search stops once alpha/2 exceeds the best value. The value and witness
/// equal the unpruned scan exactly.
inline ReachBoundResult reach_upper_bound(const PointCloud& cloud, double epsilon,
                                          const ReachBoundOptions& options = {}) {
  if (!(epsilon >= 0.0)) throw PreconditionError("reach_upper_bound: epsilon must be >= 0");
  if (cloud.empty()) throw PreconditionError("reach_upper_bound: empty cloud");
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();
  ReachBoundResult result;
  result.epsilon = epsilon;
  if (n < 2) {
    result.admissible_empty = true;
    return result;
  }
  const SpatialIndex index(cloud, options.index_mode);
  std::atomic<double> best_value{kInfinity};
  std::atomic<std::uint64_t> examined{0};
  std::atomic<bool> any_admissible{false};

  auto evaluate = [&](std::size_t i, std::size_t j, double alpha, std::span<double> mid,
                      detail::PairCandidate& local, bool prune) {
    double floor = -1.0;
    if (prune) {
      const double t = best_value.load(std::memory_order_relaxed);
      if (detail::reach_pair_lower_bound(alpha, epsilon) * (1.0 - 1e-9) > t) return;
      if (std::isfinite(t)) {
        floor = (epsilon + g_inv(alpha, std::max(t, alpha / 2.0))) * (1.0 - 1e-9);
      } else {
        floor = epsilon * (1.0 - 1e-9);
      }
    }
    midpoint(cloud[i], cloud[j], mid);
    examined.fetch_add(1, std::memory_order_relaxed);
    const auto nb = index.nearest_unless_below(mid, floor > 0.0 ? floor * floor : -1.0, i);
    if (!nb) return;
    const double x = nb->distance;
    if (x < epsilon) return;
    any_admissible.store(true, std::memory_order_relaxed);
    const double h = std::min(x - epsilon, alpha / 2.0);
    const double value = g(alpha, h);
    if (!std::isfinite(value)) return;
    detail::consider_pair(local, value, i, j, alpha, x);
    atomic_min(best_value, value);
  };

  std::vector<detail::PairCandidate> per_chunk;
  auto reduce = [&] {
    detail::PairCandidate best;
    for (const auto& c : per_chunk) {
      if (c.better_than(best)) best = c;
    }
    return best;
  };

  if (!options.prune) {
    const std::size_t grain = 8;
    per_chunk.assign((n + grain - 1) / grain, {});
    parallel_chunks(n, grain, [&](std::size_t begin, std::size_t end, unsigned) {
      detail::PairCandidate local;
      std::vector<double> mid(dim);
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          evaluate(i, j, distance(cloud[i], cloud[j]), mid, local, false);
        }
      }
      per_chunk[begin / grain] = local;
    });
  } else {
    const double diameter = cloud.bounding_diagonal();
    double inner = 0.0;
    double outer = std::max(2.5 * epsilon, 8.0 * detail::typical_spacing(cloud, index));
    const std::size_t grain = 16;
    per_chunk.assign((n + grain - 1) / grain, {});
    for (;;) {
      const bool last_ring = outer >= diameter;
      parallel_chunks(n, grain, [&](std::size_t begin, std::size_t end, unsigned) {
        detail::PairCandidate local = per_chunk[begin / grain];
        std::vector<double> mid(dim);
        for (std::size_t i = begin; i < end; ++i) {
          const auto ring = index.within(cloud[i], last_ring ? kInfinity : outer);
          for (const Neighbor& nb : ring) {
            if (nb.id <= i || nb.distance <= inner) continue;
            if (nb.distance / 2.0 > best_value.load(std::memory_order_relaxed)) break;
            evaluate(i, nb.id, nb.distance, mid, local, true);
          }
        }
        per_chunk[begin / grain] = local;
      });
      if (last_ring || outer / 2.0 >= best_value.load()) break;
      inner = outer;
      outer *= 2.0;
    }
  }

  const auto best = reduce();
  result.pairs_examined = examined.load();
  result.pairs_pruned = detail::pair_count(n) - result.pairs_examined;
  result.admissible_empty = !any_admissible.load();
  if (best.found) {
    result.value = best.value;
    result.witness = PairRecord{best.i, best.j, best.alpha, best.x,
                                g(best.alpha, std::min(best.x, best.alpha / 2.0))};
  }
  return result;
}

}  // namespace reachbound

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "reachbound/geometry.hpp"
#include "reachbound/point_cloud.hpp"

namespace reachbound {

enum class IndexMode {
  automatic,  // tree unless the cloud is tiny or high-dimensional
  tree,
  brute,
};

struct Neighbor {
  double distance;
  std::size_t id;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact Euclidean nearest-neighbour and range queries over an immutable cloud.
///
/// A kd-tree with bounding boxes per node. Pruning compares a box lower bound
/// computed with the same per-coordinate arithmetic as squared_distance, so
/// results match a brute-force scan exactly; ties go to the lowest point id.
/// Safe for concurrent const queries.
class SpatialIndex {
 public:
  static constexpr std::size_t kMaxTreeDim = 12;
  static constexpr std::size_t kMinTreeSize = 64;
  static constexpr std::size_t kLeafSize = 8;

  explicit SpatialIndex(const PointCloud& cloud, IndexMode mode = IndexMode::automatic)
      : dim_(cloud.dim()), n_(cloud.size()), original_(cloud.coords()) {
    if (n_ == 0) throw PreconditionError("SpatialIndex: empty cloud");
    use_tree_ = mode == IndexMode::tree ||
                (mode == IndexMode::automatic && dim_ <= kMaxTreeDim && n_ >= kMinTreeSize);
    if (use_tree_) build();
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return n_; }
  bool uses_tree() const { return use_tree_; }
  PointView point(std::size_t id) const { return {original_.data() + id * dim_, dim_}; }

  Neighbor nearest(PointView q) const { return *nearest_impl(q, -1.0, std::nullopt); }

  /// Nearest neighbour, with the search seeded by a known nearby point.
  Neighbor nearest(PointView q, std::size_t hint) const { return *nearest_impl(q, -1.0, hint); }

  /// Exact nearest neighbour, or nullopt as soon as any point is found whose
  /// squared distance is strictly below floor_sq.
  std::optional<Neighbor> nearest_unless_below(PointView q, double floor_sq,
                                               std::optional<std::size_t> hint = {}) const {
    return nearest_impl(q, floor_sq, hint);
  }

  /// All points with distance(q, p) <= radius, sorted by (distance, id).
  std::vector<Neighbor> within(PointView q, double radius) const {
    std::vector<Neighbor> out;
    visit_within(q, radius, [&](const Neighbor& nb) {
      out.push_back(nb);
      return true;
    });
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    });
    return out;
  }

  /// Calls visit(Neighbor) for every point within `radius`, in no particular
  /// order, until it returns false. Returns false if the visit was cut short.
  template <class Visit>
  bool visit_within(PointView q, double radius, Visit&& visit) const {
    check_dim(q);
    if (!(radius >= 0.0)) return true;
    // Collect with a small slack on the squared threshold, then filter on the
    // rooted distance so membership agrees with distance() exactly.
    const double thr = radius * radius * (1.0 + 1e-10) + 1e-300;
    auto consider = [&](std::size_t slot, std::size_t id) {
      const double sq = squared_distance(q, slot_point(slot));
      if (sq <= thr) {
        const double d = std::sqrt(sq);
        if (d <= radius) return visit(Neighbor{d, id});
      }
      return true;
    };
    if (!use_tree_) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (!consider(i, i)) return false;
      }
      return true;
    }
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
      const std::uint32_t self = stack.back();
      const Node& node = nodes_[self];
      stack.pop_back();
      if (box_lower_bound(self, q) > thr) continue;
      if (node.left < 0) {
        for (std::uint32_t s = node.begin; s < node.end; ++s) {
          if (!consider(s, ids_[s])) return false;
        }
      } else {
        stack.push_back(static_cast<std::uint32_t>(node.right));
        stack.push_back(static_cast<std::uint32_t>(node.left));
      }
    }
    return true;
  }

 private:
  struct Node {
    std::uint32_t begin = 0, end = 0;
    std::int32_t left = -1, right = -1;
  };
  struct Best {
    double sq;
    std::size_t id;
    bool better(double s, std::size_t i) const { return s < sq || (s == sq && i < id); }
  };

  void check_dim(PointView q) const {
    if (q.size() != dim_) {
      throw PreconditionError("SpatialIndex: query dimension " + std::to_string(q.size()) +
                              " != index dimension " + std::to_string(dim_));
    }
  }

  PointView slot_point(std::size_t slot) const {
    return use_tree_ ? PointView(points_.data() + slot * dim_, dim_) : point(slot);
  }

  std::optional<Neighbor> nearest_impl(PointView q, double floor_sq,
                                       std::optional<std::size_t> hint) const {
    check_dim(q);
    Best best{kInfinity, n_};
    if (hint) {
      best = {squared_distance(q, point(*hint)), *hint};
      if (best.sq < floor_sq) return std::nullopt;
    }
    if (!use_tree_) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double sq = squared_distance(q, point(i));
        if (best.better(sq, i)) {
          best = {sq, i};
          if (sq < floor_sq) return std::nullopt;
        }
      }
    } else {
      if (!search(0, box_lower_bound(0, q), q, best, floor_sq)) return std::nullopt;
    }
    return Neighbor{std::sqrt(best.sq), best.id};
  }

  // Returns false when aborted by the floor.
  bool search(std::uint32_t self, double lb, PointView q, Best& best, double floor_sq) const {
    if (lb > best.sq) return true;
    const Node& node = nodes_[self];
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        const double sq = squared_distance(q, slot_point(s));
        if (best.better(sq, ids_[s])) {
          best = {sq, ids_[s]};
          if (sq < floor_sq) return false;
        }
      }
      return true;
    }
    const auto l = static_cast<std::uint32_t>(node.left);
    const auto r = static_cast<std::uint32_t>(node.right);
    const double lb_l = box_lower_bound(l, q);
    const double lb_r = box_lower_bound(r, q);
    if (lb_l <= lb_r) {
      if (!search(l, lb_l, q, best, floor_sq)) return false;
      return search(r, lb_r, q, best, floor_sq);
    }
    if (!search(r, lb_r, q, best, floor_sq)) return false;
    return search(l, lb_l, q, best, floor_sq);
  }

  double box_lower_bound(std::uint32_t node, PointView q) const {
    const double* lo = lo_.data() + node * dim_;
    const double* hi = hi_.data() + node * dim_;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double t = 0.0;
      if (q[k] < lo[k]) {
        t = lo[k] - q[k];
      } else if (q[k] > hi[k]) {
        t = q[k] - hi[k];
      }
      s += t * t;
    }
    return s;
  }

  void build() {
    std::vector<std::uint32_t> perm(n_);
    std::iota(perm.begin(), perm.end(), 0u);
    nodes_.reserve(2 * n_ / kLeafSize + 2);
    build_node(perm, 0, static_cast<std::uint32_t>(n_));
    points_.resize(n_ * dim_);
    ids_.resize(n_);
    for (std::size_t s = 0; s < n_; ++s) {
      ids_[s] = perm[s];
      const auto p = point(perm[s]);
      std::copy(p.begin(), p.end(), points_.begin() + s * dim_);
    }
  }

  std::uint32_t build_node(std::vector<std::uint32_t>& perm, std::uint32_t begin,
                           std::uint32_t end) {
    const auto self = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1});
    lo_.resize(lo_.size() + dim_);
    hi_.resize(hi_.size() + dim_);
    double* lo = lo_.data() + self * dim_;
    double* hi = hi_.data() + self * dim_;
    std::fill(lo, lo + dim_, kInfinity);
    std::fill(hi, hi + dim_, -kInfinity);
    for (std::uint32_t s = begin; s < end; ++s) {
      const auto p = point(perm[s]);
      for (std::size_t k = 0; k < dim_; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    if (end - begin <= kLeafSize) return self;
    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      if (hi[k] - lo[k] > widest) {
        widest = hi[k] - lo[k];
        axis = k;
      }
    }
    if (widest <= 0.0) return self;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(perm.begin() + begin, perm.begin() + mid, perm.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return original_[a * dim_ + axis] < original_[b * dim_ + axis];
                     });
    const std::uint32_t l = build_node(perm, begin, mid);
    const std::uint32_t r = build_node(perm, mid, end);
    nodes_[self].left = static_cast<std::int32_t>(l);
    nodes_[self].right = static_cast<std::int32_t>(r);
    return self;
  }

  std::size_t dim_;
  std::size_t n_;
  bool use_tree_ = false;
  std::vector<double> original_;
  std::vector<double> points_;  // tree order
  std::vector<std::size_t> ids_;
  std::vector<Node> nodes_;
  std::vector<double> lo_, hi_;
};

/// Distance from q to the nearest indexed point, with the lowest-id witness.
inline Neighbor nearest_distance(const SpatialIndex& index, PointView q) {
  return index.nearest(q);
}

inline SpatialIndex build_index(const PointCloud& cloud, IndexMode mode = IndexMode::automatic) {
  return SpatialIndex(cloud, mode);
}

}  // namespace reachbound

#pragma once

#include <concepts>
#include <cstddef>
#include <optional>

#include "reachbound/mesh.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/spatial_index.hpp"

namespace reachbound {

/// Distance from a query to a closed reference set.
///
/// `hint` names a sample point known to be near the query (e.g. a pair
/// endpoint); oracles may use it to seed the search. distance_unless_below
/// returns nullopt once the distance is known to be strictly below `floor`.
template <class O>
concept DistanceOracle = requires(const O& o, PointView q, double floor, std::optional<std::size_t> hint) {
  { o.dim() } -> std::convertible_to<std::size_t>;
  { o.distance(q, hint) } -> std::convertible_to<double>;
  { o.distance_unless_below(q, floor, hint) } -> std::same_as<std::optional<double>>;
};

/// The sample cloud itself as the reference set.
class CloudOracle {
 public:
  explicit CloudOracle(const PointCloud& cloud, IndexMode mode = IndexMode::automatic)
      : index_(cloud, mode) {}

  std::size_t dim() const { return index_.dim(); }
  const SpatialIndex& index() const { return index_; }

  double distance(PointView q, std::optional<std::size_t> hint = {}) const {
    return hint ? index_.nearest(q, *hint).distance : index_.nearest(q).distance;
  }

  std::optional<double> distance_unless_below(PointView q, double floor,
                                              std::optional<std::size_t> hint = {}) const {
    const double floor_sq = floor > 0.0 ? floor * floor : -1.0;
    auto nb = index_.nearest_unless_below(q, floor_sq, hint);
    if (!nb) return std::nullopt;
    return nb->distance;
  }

 private:
  SpatialIndex index_;
};

/// A triangle mesh in R^3 as the reference set.
class MeshOracle {
 public:
  explicit MeshOracle(const TriangleMesh& mesh) : index_(mesh) {}

  std::size_t dim() const { return 3; }

  double distance(PointView q, std::optional<std::size_t> = {}) const { return index_.distance(q); }

  std::optional<double> distance_unless_below(PointView q, double floor,
                                              std::optional<std::size_t> = {}) const {
    return index_.distance_unless_below(q, floor);
  }

 private:
  MeshIndex index_;
};

static_assert(DistanceOracle<CloudOracle>);
static_assert(DistanceOracle<MeshOracle>);

}  // namespace reachbound

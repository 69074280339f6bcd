#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "reachbound/geometry.hpp"
#include "reachbound/point_cloud.hpp"

namespace reachbound {

using Vec3 = std::array<double, 3>;

namespace detail {
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline Vec3 axpy(const Vec3& p, double s, const Vec3& v) {
  return {p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]};
}
}  // namespace detail

/// Closest point to p on triangle (a, b, c); handles the face, edge and vertex regions.
/// Voronoi-region walk after Ericson, Real-Time Collision Detection, 5.1.5.
inline Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  using namespace detail;
  const Vec3 ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = sub(p, b);
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return axpy(a, d1 / (d1 - d3), ab);

  const Vec3 cp = sub(p, c);
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return axpy(a, d2 / (d2 - d6), ac);

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return axpy(b, (d4 - d3) / ((d4 - d3) + (d5 - d6)), sub(c, b));
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return {a[0] + ab[0] * v + ac[0] * w, a[1] + ab[1] * v + ac[1] * w,
          a[2] + ab[2] * v + ac[2] * w};
}

inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 q = closest_point_on_triangle(p, a, b, c);
  return std::sqrt(detail::dot(detail::sub(p, q), detail::sub(p, q)));
}

/// Triangle soup in R^3. Degenerate (zero-area) triangles are dropped on construction.
class TriangleMesh {
 public:
  using Triangle = std::array<std::uint32_t, 3>;

  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> vertices, const std::vector<Triangle>& triangles)
      : vertices_(std::move(vertices)) {
    for (const auto& t : triangles) {
      for (auto v : t) {
        if (v >= vertices_.size()) throw PreconditionError("TriangleMesh: vertex id out of range");
      }
      const Vec3 n = detail::cross(detail::sub(vertices_[t[1]], vertices_[t[0]]),
                                   detail::sub(vertices_[t[2]], vertices_[t[0]]));
      if (detail::dot(n, n) > 0.0) triangles_.push_back(t);
    }
  }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::size_t size() const { return triangles_.size(); }

  double distance_to_triangle(std::size_t t, const Vec3& p) const {
    const auto& tri = triangles_[t];
    return point_triangle_distance(p, vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
  }

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
};

inline Vec3 to_vec3(PointView q) {
  if (q.size() != 3) throw PreconditionError("mesh distance: query must be 3-dimensional");
  return {q[0], q[1], q[2]};
}

/// Exact minimum point-to-triangle distance by scanning every triangle.
inline double distance_to_mesh(const TriangleMesh& mesh, PointView q) {
  const Vec3 p = to_vec3(q);
  double best = kInfinity;
  for (std::size_t t = 0; t < mesh.size(); ++t) best = std::min(best, mesh.distance_to_triangle(t, p));
  return best;
}

/// Bounding-volume hierarchy over a mesh's triangles for distance queries.
///
/// The result is the minimum of the same per-triangle values the linear scan
/// computes, so it equals distance_to_mesh exactly.
class MeshIndex {
 public:
  static constexpr std::size_t kLeafSize = 4;

  explicit MeshIndex(const TriangleMesh& mesh) : mesh_(&mesh) {
    if (mesh.size() == 0) throw PreconditionError("MeshIndex: mesh has no triangles");
    order_.resize(mesh.size());
    std::iota(order_.begin(), order_.end(), 0u);
    centroids_.resize(mesh.size());
    for (std::size_t t = 0; t < mesh.size(); ++t) {
      const auto& tri = mesh.triangles()[t];
      for (int k = 0; k < 3; ++k) {
        centroids_[t][k] = (mesh.vertices()[tri[0]][k] + mesh.vertices()[tri[1]][k] +
                            mesh.vertices()[tri[2]][k]) / 3.0;
      }
    }
    build(0, static_cast<std::uint32_t>(mesh.size()));
  }

  const TriangleMesh& mesh() const { return *mesh_; }

  double distance(PointView q) const { return *distance_unless_below(q, -1.0); }

  /// Exact distance, or nullopt once some triangle is found strictly closer than `floor`.
  std::optional<double> distance_unless_below(PointView q, double floor) const {
    const Vec3 p = to_vec3(q);
    double best = kInfinity;
    if (!search(0, p, best, floor)) return std::nullopt;
    return best;
  }

 private:
  struct Node {
    Vec3 lo, hi;
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
  };

  static double box_distance(const Node& n, const Vec3& p) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      double t = 0.0;
      if (p[k] < n.lo[k]) t = n.lo[k] - p[k];
      else if (p[k] > n.hi[k]) t = p[k] - n.hi[k];
      s += t * t;
    }
    // Shrink slightly: the triangle distance is computed along a different path.
    return std::max(0.0, std::sqrt(s) * (1.0 - 1e-9) - 1e-12);
  }

  bool search(std::uint32_t self, const Vec3& p, double& best, double floor) const {
    const Node& node = nodes_[self];
    if (box_distance(node, p) > best) return true;
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        best = std::min(best, mesh_->distance_to_triangle(order_[s], p));
        if (best < floor) return false;
      }
      return true;
    }
    const auto l = static_cast<std::uint32_t>(node.left);
    const auto r = static_cast<std::uint32_t>(node.right);
    const bool left_first = box_distance(nodes_[l], p) <= box_distance(nodes_[r], p);
    const std::uint32_t first = left_first ? l : r, second = left_first ? r : l;
    if (!search(first, p, best, floor)) return false;
    return search(second, p, best, floor);
  }

  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    Node node{{kInfinity, kInfinity, kInfinity}, {-kInfinity, -kInfinity, -kInfinity}, begin, end};
    for (std::uint32_t s = begin; s < end; ++s) {
      for (auto v : mesh_->triangles()[order_[s]]) {
        for (int k = 0; k < 3; ++k) {
          node.lo[k] = std::min(node.lo[k], mesh_->vertices()[v][k]);
          node.hi[k] = std::max(node.hi[k], mesh_->vertices()[v][k]);
        }
      }
    }
    const auto self = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) return self;
    int axis = 0;
    for (int k = 1; k < 3; ++k) {
      if (node.hi[k] - node.lo[k] > node.hi[axis] - node.lo[axis]) axis = k;
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return centroids_[a][axis] < centroids_[b][axis];
                     });
    const std::uint32_t l = build(begin, mid);
    const std::uint32_t r = build(mid, end);
    nodes_[self].left = static_cast<std::int32_t>(l);
    nodes_[self].right = static_cast<std::int32_t>(r);
    return self;
  }

  const TriangleMesh* mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Vec3> centroids_;
  std::vector<Node> nodes_;
};

}  // namespace reachbound

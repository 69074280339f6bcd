#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "reachbound/geometry.hpp"
#include "reachbound/mesh.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/rconv_bound.hpp"
#include "reachbound/rng.hpp"
#include "reachbound/spatial_index.hpp"

namespace reachbound {

enum class ShapeKind { two_rays, arc, c2_graph, paraboloid, two_spheres, disk, set_U, set_W };

inline std::string_view to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::two_rays: return "two_rays";
    case ShapeKind::arc: return "arc";
    case ShapeKind::c2_graph: return "c2_graph";
    case ShapeKind::paraboloid: return "paraboloid";
    case ShapeKind::two_spheres: return "two_spheres";
    case ShapeKind::disk: return "disk";
    case ShapeKind::set_U: return "set_U";
    case ShapeKind::set_W: return "set_W";
  }
  return "?";
}

inline ShapeKind parse_shape_kind(std::string_view s) {
  for (auto k : {ShapeKind::two_rays, ShapeKind::arc, ShapeKind::c2_graph, ShapeKind::paraboloid,
                 ShapeKind::two_spheres, ShapeKind::disk, ShapeKind::set_U, ShapeKind::set_W}) {
    if (to_string(k) == s) return k;
  }
  throw PreconditionError("unknown shape kind: " + std::string(s));
}

inline bool is_grid_kind(ShapeKind k) {
  return k == ShapeKind::disk || k == ShapeKind::set_U || k == ShapeKind::set_W;
}

/// Parameters of a synthetic shape. Fields that a kind does not use are ignored.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::arc;
  double angle = std::numbers::pi / 2;  // two_rays opening angle; arc angle (2*pi = full circle)
  double radius = 1.0;                  // arc, sphere and disk radius
  double length = 1.0;                  // two_rays ray length
  double focal = 4.0;                   // paraboloid |u|^2 = 2 * focal * x_{m+1}
  double extent = 6.0;                  // paraboloid parameter-domain radius
  double h1 = 0.5, h2 = 0.0;            // c2_graph: h(t) = h1 t + h2 t^2 / 2, f(x) = h(x^2)
  double center_gap = 12.0;             // two_spheres distance between centres
  int ambient_dim = 3;
  int manifold_dim = 2;
  std::size_t n = 100;                  // sample count (points per ray for two_rays)
  double spacing = 0.1;                 // lattice spacing for grid kinds
  double window = 3.0;                  // grid labels are clipped to [-window, window]^2
  double margin = 4.5;                  // lattice extends this far beyond the window
  std::uint64_t seed = 1;
};

/// One linear piece of a closed-form profile, valid for beta up to beta_end.
struct ProfilePiece {
  double beta_end;
  double intercept;
  double slope;
};

struct GroundTruth {
  double reach = kInfinity;
  double rconv = kInfinity;
  /// Consecutive pieces starting at beta = 0; empty when no closed form is known.
  std::vector<ProfilePiece> profile_model;
  /// Bound on the Hausdorff distance between the sample and the ideal set.
  /// Exact for deterministic samples and lattices, a dense-reference estimate
  /// for random manifold samples.
  double hausdorff_bound = 0.0;
};

struct SyntheticSample {
  std::variant<PointCloud, LabeledGrid> data;
  GroundTruth truth;

  bool is_grid() const { return std::holds_alternative<LabeledGrid>(data); }
  const PointCloud& cloud() const { return std::get<PointCloud>(data); }
  const LabeledGrid& grid() const { return std::get<LabeledGrid>(data); }
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(std::string("shape spec: ") + what);
}

inline void validate(const ShapeSpec& s) {
  switch (s.kind) {
    case ShapeKind::two_rays:
      require(s.angle > 0.0 && s.angle < std::numbers::pi, "angle must lie in (0, pi)");
      require(s.length > 0.0, "length must be > 0");
      require(s.n >= 2, "need >= 2 points per ray");
      break;
    case ShapeKind::arc:
      require(s.angle > 0.0 && s.angle <= 2 * std::numbers::pi, "arc angle must lie in (0, 2pi]");
      require(s.radius > 0.0, "radius must be > 0");
      require(s.n >= 2, "need >= 2 points");
      break;
    case ShapeKind::c2_graph:
      require(s.h1 > 0.0, "h1 must be > 0");
      require(s.n >= 2, "need >= 2 points");
      break;
    case ShapeKind::paraboloid:
      require(s.focal > 0.0 && s.extent > 0.0, "focal length and extent must be > 0");
      require(s.manifold_dim >= 1, "manifold dimension must be >= 1");
      require(s.ambient_dim >= s.manifold_dim + 1, "ambient dimension must be >= m + 1");
      require(s.n >= 1, "need >= 1 point");
      break;
    case ShapeKind::two_spheres:
      require(s.radius > 0.0, "radius must be > 0");
      require(s.center_gap > 2.0 * s.radius, "spheres must be disjoint");
      require(s.manifold_dim >= 1, "manifold dimension must be >= 1");
      require(s.ambient_dim >= s.manifold_dim + 1, "ambient dimension must be >= m + 1");
      require(s.n >= 1, "need >= 1 point");
      break;
    case ShapeKind::disk:
      require(s.radius > 0.0, "radius must be > 0");
      [[fallthrough]];
    case ShapeKind::set_U:
    case ShapeKind::set_W:
      require(s.spacing > 0.0, "spacing must be > 0");
      require(s.window > 0.0 && s.margin >= 0.0, "window must be > 0 and margin >= 0");
      break;
  }
}

// Rows of a random orthogonal d x d matrix (Gram-Schmidt on Gaussian vectors).
inline std::vector<std::vector<double>> random_rotation(std::size_t d, SplitMix64& rng) {
  std::vector<std::vector<double>> q;
  while (q.size() < d) {
    std::vector<double> v(d);
    for (auto& c : v) c = rng.normal();
    for (const auto& u : q) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += u[k] * v[k];
      for (std::size_t k = 0; k < d; ++k) v[k] -= dot * u[k];
    }
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (auto& c : v) c /= norm;
    q.push_back(std::move(v));
  }
  return q;
}

// Pads points from R^k to R^d; for d > k also applies a seeded rotation.
inline PointCloud embed(const std::vector<std::vector<double>>& pts, std::size_t d,
                        SplitMix64& rng) {
  PointCloud out(d);
  out.reserve(pts.size());
  const std::size_t k = pts.empty() ? d : pts.front().size();
  std::vector<std::vector<double>> rot;
  if (d > k) rot = random_rotation(d, rng);
  std::vector<double> y(d);
  for (const auto& p : pts) {
    if (rot.empty()) {
      std::fill(y.begin(), y.end(), 0.0);
      std::copy(p.begin(), p.end(), y.begin());
    } else {
      for (std::size_t r = 0; r < d; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += rot[r][c] * p[c];
        y[r] = s;
      }
    }
    out.push_back(y);
  }
  return out;
}

inline std::vector<double> unit_vector(std::size_t dim, SplitMix64& rng) {
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& c : v) {
      c = rng.normal();
      norm += c * c;
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  for (auto& c : v) c /= norm;
  return v;
}

// Uniform point in the m-ball of radius r.
inline std::vector<double> ball_point(std::size_t m, double r, SplitMix64& rng) {
  auto v = unit_vector(m, rng);
  const double s = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
  for (auto& c : v) c *= s;
  return v;
}

// Paraboloid point over parameter u, uniform in surface area by rejection on
// the area element sqrt(1 + |u|^2 / c^2).
inline std::vector<double> paraboloid_point(const ShapeSpec& s, SplitMix64& rng) {
  const auto m = static_cast<std::size_t>(s.manifold_dim);
  const double c = s.focal;
  const double top = std::sqrt(1.0 + s.extent * s.extent / (c * c));
  for (;;) {
    auto u = ball_point(m, s.extent, rng);
    double uu = 0.0;
    for (double x : u) uu += x * x;
    if (rng.uniform() * top <= std::sqrt(1.0 + uu / (c * c))) {
      u.push_back(uu / (2.0 * c));
      return u;
    }
  }
}

inline std::vector<double> two_spheres_point(const ShapeSpec& s, SplitMix64& rng) {
  const auto m = static_cast<std::size_t>(s.manifold_dim);
  const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
  auto v = unit_vector(m + 1, rng);
  for (auto& c : v) c *= s.radius;
  v[0] += side * s.center_gap / 2.0;
  return v;
}

// Largest distance from a dense reference sample of the ideal set to the cloud.
template <class Draw>
double max_gap_estimate(const std::vector<std::vector<double>>& sample, std::size_t reference,
                        SplitMix64& rng, Draw&& draw) {
  PointCloud cloud(sample.front().size());
  for (const auto& p : sample) cloud.push_back(p);
  const SpatialIndex index(cloud);
  double worst = 0.0;
  for (std::size_t k = 0; k < reference; ++k) {
    worst = std::max(worst, index.nearest(draw(rng)).distance);
  }
  return worst;
}

inline bool grid_member(const ShapeSpec& s, double x, double y) {
  switch (s.kind) {
    case ShapeKind::disk: return x * x + y * y <= s.radius * s.radius;
    case ShapeKind::set_U: return y <= x * x / 2.0;
    case ShapeKind::set_W: return std::abs(y) >= x * x / 2.0 + 1.0;
    default: return false;
  }
}

}  // namespace detail

/// Lattice point (i, j) of a grid spec under its seeded rotation and offset.
struct LatticeFrame {
  double spacing, cos_t, sin_t, ox, oy;
  std::pair<double, double> at(long i, long j) const {
    const double u = spacing * static_cast<double>(i) + ox;
    const double v = spacing * static_cast<double>(j) + oy;
    return {cos_t * u - sin_t * v, sin_t * u + cos_t * v};
  }
};

inline LatticeFrame lattice_frame(const ShapeSpec& s) {
  SplitMix64 rng(s.seed);
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double ox = rng.uniform(0.0, s.spacing);
  const double oy = rng.uniform(0.0, s.spacing);
  return {s.spacing, std::cos(theta), std::sin(theta), ox, oy};
}

/// Analytic membership of a grid kind, clipped to the window.
inline bool grid_label(const ShapeSpec& s, double x, double y) {
  return std::abs(x) <= s.window && std::abs(y) <= s.window && detail::grid_member(s, x, y);
}

/// Deterministic sample of the shape described by `s`, with its ground truth.
inline SyntheticSample generate(const ShapeSpec& s) {
  detail::validate(s);
  using std::numbers::pi;
  SyntheticSample out;
  GroundTruth& t = out.truth;

  switch (s.kind) {
    case ShapeKind::two_rays: {
      PointCloud cloud(2);
      const double h = s.angle / 2.0;
      const double step = s.length / static_cast<double>(s.n - 1);
      cloud.push_back({0.0, 0.0});
      for (double sign : {1.0, -1.0}) {
        for (std::size_t k = 1; k < s.n; ++k) {
          const double r = step * static_cast<double>(k);
          cloud.push_back({r * std::cos(h), sign * r * std::sin(h)});
        }
      }
      t.reach = 0.0;
      t.rconv = 0.0;
      const double sec = 1.0 / std::cos(h);
      t.profile_model = {{s.length * std::sin(s.angle) / 2.0, 0.0, (1.0 + sec * sec) / 2.0}};
      t.hausdorff_bound = step / 2.0;
      out.data = std::move(cloud);
      return out;
    }
    case ShapeKind::arc: {
      PointCloud cloud(2);
      const bool full = s.angle >= 2 * pi;
      const double step = full ? 2 * pi / static_cast<double>(s.n)
                               : s.angle / static_cast<double>(s.n - 1);
      for (std::size_t k = 0; k < s.n; ++k) {
        const double a = step * static_cast<double>(k);
        cloud.push_back({s.radius * std::cos(a), s.radius * std::sin(a)});
      }
      cloud.deduplicate();
      t.reach = s.radius;
      t.rconv = s.radius;
      t.profile_model = {{full ? s.radius : kInfinity, s.radius, 0.0}};
      t.hausdorff_bound = 2.0 * s.radius * std::sin(step / 4.0);
      out.data = std::move(cloud);
      return out;
    }
    case ShapeKind::c2_graph: {
      auto f = [&](double x) {
        const double u = x * x;
        return s.h1 * u + s.h2 * u * u / 2.0;
      };
      PointCloud cloud(2);
      const double step = 2.0 / static_cast<double>(s.n - 1);
      double worst = 0.0;
      for (std::size_t k = 0; k < s.n; ++k) {
        const double x = -1.0 + step * static_cast<double>(k);
        cloud.push_back({x, f(x)});
        if (k + 1 < s.n) {
          // Half the arc length between neighbours bounds the gap.
          double len = 0.0;
          const int sub = 64;
          for (int q = 0; q < sub; ++q) {
            const double a = x + step * q / sub, b = x + step * (q + 1) / sub;
            len += std::hypot(b - a, f(b) - f(a));
          }
          worst = std::max(worst, len / 2.0);
        }
      }
      t.reach = 1.0 / (2.0 * s.h1);
      t.rconv = t.reach;
      t.profile_model = {{std::min(t.reach, f(1.0)), t.reach,
                          0.5 - s.h2 / (4.0 * s.h1 * s.h1 * s.h1)}};
      t.hausdorff_bound = worst;
      out.data = std::move(cloud);
      return out;
    }
    case ShapeKind::paraboloid:
    case ShapeKind::two_spheres: {
      SplitMix64 rng(s.seed);
      SplitMix64 sampler = rng.fork();
      SplitMix64 rotation = rng.fork();
      SplitMix64 reference = rng.fork();
      auto draw = [&](SplitMix64& r) {
        return s.kind == ShapeKind::paraboloid ? detail::paraboloid_point(s, r)
                                               : detail::two_spheres_point(s, r);
      };
      std::vector<std::vector<double>> pts(s.n);
      for (auto& p : pts) p = draw(sampler);
      const std::size_t refs = std::min<std::size_t>(50000, 10 * s.n);
      t.hausdorff_bound = detail::max_gap_estimate(pts, refs, reference, draw);
      if (s.kind == ShapeKind::paraboloid) {
        t.reach = s.focal;
        t.rconv = s.focal;
        const double end = std::min(s.focal, s.extent * s.extent / (2.0 * s.focal));
        t.profile_model = {{end, s.focal, 0.5}};
      } else {
        const double half_gap = (s.center_gap - 2.0 * s.radius) / 2.0;
        t.reach = std::min(s.radius, half_gap);
        t.rconv = t.reach;
        if (half_gap > s.radius) {
          t.profile_model = {{s.radius, s.radius, 0.0}, {half_gap, half_gap, 0.0}};
        } else {
          t.profile_model = {{half_gap, half_gap, 0.0}};
        }
      }
      out.data = detail::embed(pts, static_cast<std::size_t>(s.ambient_dim), rotation);
      return out;
    }
    case ShapeKind::disk:
    case ShapeKind::set_U:
    case ShapeKind::set_W: {
      const LatticeFrame frame = lattice_frame(s);
      const double half = s.window + s.margin;
      const long reach_idx = static_cast<long>(std::ceil(half * std::sqrt(2.0) / s.spacing)) + 2;
      LabeledGrid grid;
      grid.phi = PointCloud(2);
      for (long i = -reach_idx; i <= reach_idx; ++i) {
        for (long j = -reach_idx; j <= reach_idx; ++j) {
          const auto [x, y] = frame.at(i, j);
          if (std::abs(x) > half || std::abs(y) > half) continue;
          grid.phi.push_back({x, y});
          grid.inside.push_back(grid_label(s, x, y) ? 1 : 0);
        }
      }
      grid.epsilon = covering_radius(s.spacing, 2);
      t.hausdorff_bound = grid.epsilon;
      t.reach = s.kind == ShapeKind::disk ? kInfinity : 1.0;
      t.rconv = t.reach;
      out.data = std::move(grid);
      return out;
    }
  }
  throw PreconditionError("generate: unsupported shape");
}

/// Closed-form profile value of the ideal shape at beta.
inline double ground_truth_profile(const std::vector<ProfilePiece>& model, double beta) {
  if (model.empty()) throw PreconditionError("ground_truth_profile: no closed-form model");
  if (!(beta >= 0.0) || beta > model.back().beta_end) {
    throw PreconditionError("ground_truth_profile: beta outside the model's validity range");
  }
  for (const auto& p : model) {
    if (beta <= p.beta_end) return p.intercept + p.slope * beta;
  }
  return kInfinity;
}

inline double ground_truth_profile(const ShapeSpec& spec, double beta) {
  detail::validate(spec);
  if (is_grid_kind(spec.kind)) {
    throw PreconditionError("ground_truth_profile: no closed-form model for grid kinds");
  }
  ShapeSpec probe = spec;
  probe.n = std::min<std::size_t>(spec.n, 2);
  if (spec.kind == ShapeKind::paraboloid || spec.kind == ShapeKind::two_spheres) probe.n = 1;
  return ground_truth_profile(generate(probe).truth.profile_model, beta);
}

/// Triangulated paraboloid |u|^2 = 2c z over a disk of radius `extent`
/// (polar grid: `rings` concentric rings of `sectors` vertices).
inline TriangleMesh paraboloid_mesh(double focal, double extent, std::size_t rings,
                                    std::size_t sectors) {
  if (rings < 1 || sectors < 3) throw PreconditionError("paraboloid_mesh: too coarse");
  std::vector<Vec3> v{{0.0, 0.0, 0.0}};
  for (std::size_t r = 1; r <= rings; ++r) {
    const double rad = extent * static_cast<double>(r) / static_cast<double>(rings);
    for (std::size_t k = 0; k < sectors; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(sectors);
      v.push_back({rad * std::cos(a), rad * std::sin(a), rad * rad / (2.0 * focal)});
    }
  }
  auto id = [&](std::size_t r, std::size_t k) {
    return static_cast<std::uint32_t>(1 + (r - 1) * sectors + k % sectors);
  };
  std::vector<TriangleMesh::Triangle> tris;
  for (std::size_t k = 0; k < sectors; ++k) tris.push_back({0, id(1, k), id(1, k + 1)});
  for (std::size_t r = 1; r < rings; ++r) {
    for (std::size_t k = 0; k < sectors; ++k) {
      tris.push_back({id(r, k), id(r + 1, k), id(r + 1, k + 1)});
      tris.push_back({id(r, k), id(r + 1, k + 1), id(r, k + 1)});
    }
  }
  return TriangleMesh(std::move(v), tris);
}

}  // namespace reachbound

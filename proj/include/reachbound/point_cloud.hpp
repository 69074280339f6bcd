#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "reachbound/geometry.hpp"

namespace reachbound {

using PointView = std::span<const double>;

/// Squared Euclidean distance, summed in coordinate order.
///
/// Every distance in the library goes through this function so that the
/// spatial index and brute-force scans produce bit-identical values.
inline double squared_distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

inline double distance(PointView a, PointView b) { return std::sqrt(squared_distance(a, b)); }

/// Componentwise (a + b) / 2.
inline void midpoint(PointView a, PointView b, std::span<double> out) {
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = 0.5 * (a[k] + b[k]);
}

/// A finite set of points in R^d stored row-major in one contiguous buffer.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw PreconditionError("PointCloud: dimension must be >= 1");
  }

  /// Builds a cloud from rows; all rows must share one length.
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw PreconditionError("PointCloud: no points");
    PointCloud cloud(rows.front().size());
    for (const auto& r : rows) cloud.push_back(r);
    return cloud;
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return size() == 0; }

  PointView operator[](std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  const std::vector<double>& coords() const { return coords_; }

  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  void push_back(PointView p) {
    if (dim_ == 0) {
      if (p.empty()) throw PreconditionError("PointCloud: dimension must be >= 1");
      dim_ = p.size();
    }
    if (p.size() != dim_) {
      throw PreconditionError("PointCloud: point of dimension " + std::to_string(p.size()) +
                              " added to cloud of dimension " + std::to_string(dim_));
    }
    for (double c : p) {
      if (!std::isfinite(c)) throw PreconditionError("PointCloud: non-finite coordinate");
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  void push_back(std::initializer_list<double> p) {
    push_back(PointView(p.begin(), p.size()));
  }

  /// Removes exact duplicates, keeping first occurrences in their original order.
  /// Returns the original index of every kept point.
  std::vector<std::size_t> deduplicate() {
    const std::size_t n = size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto lex_less = [&](std::size_t a, std::size_t b) {
      const auto pa = (*this)[a];
      const auto pb = (*this)[b];
      return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    };
    std::stable_sort(order.begin(), order.end(), lex_less);
    std::vector<char> drop(n, 0);
    for (std::size_t k = 1; k < n; ++k) {
      const auto prev = (*this)[order[k - 1]];
      const auto cur = (*this)[order[k]];
      if (std::equal(prev.begin(), prev.end(), cur.begin())) drop[order[k]] = 1;
    }
    std::vector<std::size_t> kept;
    std::vector<double> coords;
    coords.reserve(coords_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (drop[i]) continue;
      kept.push_back(i);
      const auto p = (*this)[i];
      coords.insert(coords.end(), p.begin(), p.end());
    }
    coords_ = std::move(coords);
    return kept;
  }

  /// Subset of points selected by index, in the given order.
  PointCloud select(std::span<const std::size_t> ids) const {
    PointCloud out(dim_);
    out.reserve(ids.size());
    for (std::size_t i : ids) out.push_back((*this)[i]);
    return out;
  }

  /// Length of the bounding-box diagonal (an upper bound on the diameter).
  double bounding_diagonal() const {
    if (empty()) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double lo = coords_[k], hi = coords_[k];
      for (std::size_t i = 1; i < size(); ++i) {
        lo = std::min(lo, coords_[i * dim_ + k]);
        hi = std::max(hi, coords_[i * dim_ + k]);
      }
      s += (hi - lo) * (hi - lo);
    }
    return std::sqrt(s);
  }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

}  // namespace reachbound

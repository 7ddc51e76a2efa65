#pragma once

#include "ramified/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <map>

namespace ramified::detail {

// Finds earlier points within a geodesic tolerance without scanning them
// all: points are keyed by their first chart coordinate, and only keys
// within a window that provably contains every match are checked.
class PointLookup {
 public:
  explicit PointLookup(double tolerance) : tolerance_(tolerance) {}

  /// Smallest id of a stored point within the tolerance of p, or npos.
  std::size_t find(const ModelPoint& p) const {
    const double x = p.coords().x();
    const double w = window(p);
    std::size_t best = npos;
    for (auto it = by_x_.lower_bound(x - w); it != by_x_.end() && it->first <= x + w; ++it) {
      if (it->second.id < best && distance(it->second.point, p) <= tolerance_) best = it->second.id;
    }
    return best;
  }

  void insert(const ModelPoint& p, std::size_t id) { by_x_.emplace(p.coords().x(), Entry{p, id}); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct Entry {
    ModelPoint point;
    std::size_t id;
  };

  // Chart coordinates move at most sqrt(2) |c| + 1 per unit-model length
  // (the hyperboloid stretches; the sphere and the plane do not), so this
  // window, padded for the farther point, is conservative.
  double window(const ModelPoint& p) const {
    const double unit = tolerance_ / p.curvature().length_scale();
    const double stretch =
        p.curvature().geometry() == Geometry::hyperbolic ? std::sqrt(2.0) * (p.coords().norm() + unit) + 1.0 : 1.0;
    return unit * stretch * 1.5 + 1e-15;
  }

  double tolerance_;
  std::multimap<double, Entry> by_x_;
};

}  // namespace ramified::detail

#pragma once

#include "ramified/geometry.hpp"
#include "ramified/measure.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ramified {

/// Directed geodesic edge between two vertex indices carrying mass `weight`.
struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;
  double weight = 0.0;
};

/// Weighted directed graph with geodesic edges between a source and a sink
/// measure. Edge geometry is always re-derived from vertex positions.
class TransportPath {
 public:
  TransportPath() = default;
  /// Throws ValidationError on out-of-range endpoints, nonpositive weights or
  /// mixed curvature tags. Balance and acyclicity are checked by validate().
  TransportPath(std::vector<ModelPoint> vertices, std::vector<Edge> edges, AtomicMeasure source, AtomicMeasure sink);

  const std::vector<ModelPoint>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const AtomicMeasure& source() const { return source_; }
  const AtomicMeasure& sink() const { return sink_; }
  Curvature curvature() const;

  double edge_length(std::size_t e) const;
  /// Multiplies every weight and both measures by factor > 0.
  TransportPath scaled(double factor) const;

 private:
  std::vector<ModelPoint> vertices_;
  std::vector<Edge> edges_;
  AtomicMeasure source_;
  AtomicMeasure sink_;
};

struct Violation {
  enum class Kind { cycle, imbalance, missing_atom };
  Kind kind;
  /// Cycle vertices in order, the unbalanced vertex, or nothing for a
  /// missing atom.
  std::vector<std::size_t> vertices;
  /// Signed excess outflow for imbalance violations.
  double discrepancy = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Balance tolerance per unit of total source mass.
inline constexpr double kBalanceTolerance = 1e-9;

ValidationReport validate(const TransportPath& g);

/// Sum over edges of weight^alpha * length. Throws DomainError for alpha > 1
/// and ValidationError when g does not validate.
double cost_alpha(const TransportPath& g, double alpha);

struct DistanceRange {
  double min = 0.0;
  double max = 0.0;
};

/// Range of d(p, x) as x runs over edge e.
DistanceRange edge_distance_range(const TransportPath& g, std::size_t e, const ModelPoint& p);

/// Restriction of g to the closed ball B(p, r0). Edges are clipped where
/// they cross the sphere S(p, r0); the fragment's measures are the vertex
/// imbalances of the clipped graph, so it satisfies the balance equation.
TransportPath restrict_to_ball(const TransportPath& g, const ModelPoint& p, double r0);

/// Midpoint-rule value of the integral over r in [0, r0] of the summed
/// weight^alpha of edges meeting the sphere S(p, r).
double sphere_slice_bound(const TransportPath& g, const ModelPoint& p, double r0, double alpha, int samples);

}  // namespace ramified

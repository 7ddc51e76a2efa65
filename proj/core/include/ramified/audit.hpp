#pragma once

#include "ramified/transport_path.hpp"

#include <cstddef>
#include <vector>

namespace ramified {

/// Comparison-angle check for one pair of edges that both enter or both
/// leave a vertex.
struct AngleRecord {
  std::size_t vertex = 0;
  std::size_t edge1 = 0;
  std::size_t edge2 = 0;
  bool incoming = false;
  /// r = min(half the shortest edge at the vertex, D_k / 2).
  double probe_radius = 0.0;
  /// Distance between the points at distance r along the two edges.
  double separation = 0.0;
  /// Comparison angle at the vertex of the triangle (r, r, separation).
  double angle = 0.0;
  /// arccos(1 - R^2/2) for the two edge weights.
  double pair_bound = 0.0;
  double theta_alpha = 0.0;
  /// Separation inequality: sin(a sqrt(k)/2) >= (R/2) sin(r sqrt(k)) for
  /// k > 0, the sinh form for k < 0, a >= R r for k = 0.
  double separation_lhs = 0.0;
  double separation_rhs = 0.0;
  bool angle_ok = false;
  bool separation_ok = false;
};

struct AngleAuditOptions {
  /// Also audit pairs at source and sink vertices.
  bool include_terminals = false;
  double angle_tolerance = 1e-4;
  double separation_tolerance = 1e-6;
};

/// Audits every same-direction edge pair at the interior vertices of g
/// (vertices carrying no source or sink mass).
std::vector<AngleRecord> angle_audit(const TransportPath& g, double alpha, const AngleAuditOptions& options = {});

/// Mass-fraction check at degree-3 vertices for alpha < 0.
struct MassRecord {
  std::size_t vertex = 0;
  std::size_t edge1 = 0;
  std::size_t edge2 = 0;
  /// min(m1, m2) / (m1 + m2).
  double fraction = 0.0;
  double bound = 0.0;
  bool ok = false;
};

std::vector<MassRecord> mass_audit(const TransportPath& g, double alpha, double tolerance = 1e-6);

/// Greedy estimate of the doubling constant of the ball B(center, radius):
/// the number of balls of half the radius a greedy cover of a polar sample
/// grid needs. An estimate, not a certified constant.
double doubling_constant_estimate(const ModelPoint& center, double radius);

struct DegreeAudit {
  std::size_t max_degree = 0;
  std::size_t vertex = 0;
  double doubling_constant = 1.0;
  /// Probe radius and x = r^2 k at the max-degree vertex.
  double probe_radius = 0.0;
  double x = 0.0;
  /// 2 C_d^Phi(r^2 k, alpha) and 2 C_d^Phi(0, alpha).
  double bound_at_radius = 0.0;
  double bound_at_zero = 0.0;
  bool ok_at_radius = false;
  bool ok_at_zero = false;
};

/// Degree bound check; C_d is estimated over the ball around the first
/// vertex containing every vertex. For alpha >= 1 the bounds are infinite.
DegreeAudit degree_audit(const TransportPath& g, double alpha);

}  // namespace ramified

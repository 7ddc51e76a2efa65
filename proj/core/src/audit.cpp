#include "ramified/audit.hpp"

#include "ramified/bounds.hpp"
#include "ramified/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ramified {
namespace {

// Vertices that carry source or sink mass.
std::vector<bool> atom_vertices(const TransportPath& g) {
  std::vector<bool> marked(g.vertices().size(), false);
  auto mark = [&](const AtomicMeasure& mu) {
    for (const Atom& atom : mu.atoms()) {
      for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        if (distance(g.vertices()[v], atom.location) <= AtomicMeasure::merge_tolerance) marked[v] = true;
      }
    }
  };
  mark(g.source());
  mark(g.sink());
  return marked;
}

struct Incidence {
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
};

std::vector<Incidence> incidence(const TransportPath& g) {
  std::vector<Incidence> inc(g.vertices().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    inc[g.edges()[e].tail].out.push_back(e);
    inc[g.edges()[e].head].in.push_back(e);
  }
  return inc;
}

std::size_t other_end(const Edge& e, std::size_t v) { return e.tail == v ? e.head : e.tail; }

}  // namespace

std::vector<AngleRecord> angle_audit(const TransportPath& g, double alpha, const AngleAuditOptions& options) {
  std::vector<AngleRecord> records;
  const Curvature k = g.curvature();
  const double sqrt_k = std::sqrt(std::abs(k.value()));
  const auto atoms = atom_vertices(g);
  const auto inc = incidence(g);
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (atoms[v] && !options.include_terminals) continue;
    double shortest = std::numeric_limits<double>::infinity();
    for (const auto* list : {&inc[v].in, &inc[v].out}) {
      for (std::size_t e : *list) shortest = std::min(shortest, g.edge_length(e));
    }
    const double r = std::min(0.5 * shortest, 0.5 * k.diameter());
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    const ModelPoint& o = g.vertices()[v];
    for (const bool incoming : {true, false}) {
      const auto& list = incoming ? inc[v].in : inc[v].out;
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          const Edge& e1 = g.edges()[list[i]];
          const Edge& e2 = g.edges()[list[j]];
          AngleRecord rec;
          rec.vertex = v;
          rec.edge1 = list[i];
          rec.edge2 = list[j];
          rec.incoming = incoming;
          rec.probe_radius = r;
          const ModelPoint a1 = geodesic_point(o, g.vertices()[other_end(e1, v)], r / g.edge_length(list[i]));
          const ModelPoint a2 = geodesic_point(o, g.vertices()[other_end(e2, v)], r / g.edge_length(list[j]));
          rec.separation = distance(a1, a2);
          try {
            rec.angle = comparison_angle(r, r, rec.separation, k);
          } catch (const DomainError&) {
            // Only roundoff can push the separation past 2r.
            rec.angle = std::numbers::pi;
          }
          const double big_r = r_of_masses(e1.weight, e2.weight, std::min(alpha, 1.0));
          rec.pair_bound = alpha < 1.0 ? pair_angle_bound(e1.weight, e2.weight, alpha) : 0.0;
          rec.theta_alpha = alpha < 1.0 ? theta_alpha(alpha) : 0.0;
          switch (k.geometry()) {
            case Geometry::plane:
              rec.separation_lhs = rec.separation;
              rec.separation_rhs = big_r * r;
              break;
            case Geometry::sphere:
              rec.separation_lhs = std::sin(rec.separation * sqrt_k / 2.0);
              rec.separation_rhs = big_r / 2.0 * std::sin(r * sqrt_k);
              break;
            case Geometry::hyperbolic:
              rec.separation_lhs = std::sinh(rec.separation * sqrt_k / 2.0);
              rec.separation_rhs = big_r / 2.0 * std::sinh(r * sqrt_k);
              break;
          }
          rec.angle_ok = rec.angle >= rec.pair_bound - options.angle_tolerance;
          rec.separation_ok = rec.separation_lhs >= rec.separation_rhs - options.separation_tolerance;
          records.push_back(rec);
        }
      }
    }
  }
  return records;
}

std::vector<MassRecord> mass_audit(const TransportPath& g, double alpha, double tolerance) {
  std::vector<MassRecord> records;
  if (!(alpha < 0.0)) return records;
  const double bound = k_i_lower_bound(alpha);
  const auto atoms = atom_vertices(g);
  const auto inc = incidence(g);
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    if (atoms[v] || inc[v].in.size() + inc[v].out.size() != 3) continue;
    for (const auto* list : {&inc[v].in, &inc[v].out}) {
      if (list->size() != 2) continue;
      const double m1 = g.edges()[(*list)[0]].weight;
      const double m2 = g.edges()[(*list)[1]].weight;
      MassRecord rec;
      rec.vertex = v;
      rec.edge1 = (*list)[0];
      rec.edge2 = (*list)[1];
      rec.fraction = std::min(m1, m2) / (m1 + m2);
      rec.bound = bound;
      rec.ok = rec.fraction >= bound - tolerance;
      records.push_back(rec);
    }
  }
  return records;
}

double doubling_constant_estimate(const ModelPoint& center, double radius) {
  if (!(radius > 0.0)) return 1.0;
  const Curvature k = center.curvature();
  const double scale = k.length_scale();
  const auto [e1, e2] = tangent_basis(center);
  constexpr int kRings = 16;
  std::vector<ModelPoint> samples{center};
  for (int i = 1; i <= kRings; ++i) {
    const double rho = radius * i / kRings;
    const int count = 6 * i;
    for (int j = 0; j < count; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / count;
      samples.push_back(exp_map(center, (rho / scale) * (std::cos(phi) * e1 + std::sin(phi) * e2)));
    }
  }
  std::vector<bool> covered(samples.size(), false);
  int balls = 0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (covered[s]) continue;
    ++balls;
    for (std::size_t t = s; t < samples.size(); ++t) {
      if (!covered[t] && distance(samples[s], samples[t]) <= radius / 2.0) covered[t] = true;
    }
  }
  return balls;
}

DegreeAudit degree_audit(const TransportPath& g, double alpha) {
  if (g.vertices().empty()) throw DomainError("degree audit needs a nonempty path");
  DegreeAudit audit;
  const auto inc = incidence(g);
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const std::size_t deg = inc[v].in.size() + inc[v].out.size();
    if (deg > audit.max_degree) {
      audit.max_degree = deg;
      audit.vertex = v;
    }
  }
  const Curvature k = g.curvature();
  const ModelPoint& o = g.vertices()[audit.vertex];
  double extent = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    extent = std::max(extent, distance(g.vertices().front(), g.vertices()[v]));
    if (v != audit.vertex) nearest = std::min(nearest, distance(o, g.vertices()[v]));
  }
  audit.doubling_constant = doubling_constant_estimate(g.vertices().front(), extent);
  audit.probe_radius = std::min(nearest, 0.5 * k.diameter());
  if (!std::isfinite(audit.probe_radius)) audit.probe_radius = 0.0;
  const double pi_half_sq = std::numbers::pi * std::numbers::pi / 4.0;
  audit.x = std::min(audit.probe_radius * audit.probe_radius * k.value(), pi_half_sq);
  if (alpha < 1.0) {
    audit.bound_at_radius = degree_bound(audit.doubling_constant, audit.x, alpha);
    audit.bound_at_zero = degree_bound(audit.doubling_constant, 0.0, alpha);
  } else {
    audit.bound_at_radius = std::numeric_limits<double>::infinity();
    audit.bound_at_zero = std::numeric_limits<double>::infinity();
  }
  const auto deg = static_cast<double>(audit.max_degree);
  audit.ok_at_radius = deg <= audit.bound_at_radius;
  audit.ok_at_zero = deg <= audit.bound_at_zero;
  return audit;
}

}  // namespace ramified

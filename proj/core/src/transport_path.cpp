#include "ramified/transport_path.hpp"

#include "ramified/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

namespace ramified {
namespace {

constexpr int kEdgeSamples = 32;
constexpr int kGoldenIterations = 100;
constexpr double kBisectionTolerance = 1e-10;
// Vertices this close to the clipping sphere count as inside.
constexpr double kBoundarySlack = 1e-10;

double dist_along(const TransportPath& g, const Edge& e, const ModelPoint& p, double t) {
  return distance(p, geodesic_point(g.vertices()[e.tail], g.vertices()[e.head], t));
}

// Golden-section minimization of f on [lo, hi]; returns the argmin.
template <class F>
double golden_min(F f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < kGoldenIterations && hi - lo > 1e-15; ++i) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Root of f on [lo, hi] given opposite signs at the ends.
template <class F>
double bisect(F f, double lo, double hi) {
  const bool lo_negative = f(lo) < 0.0;
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Parameters in (0, 1) where the edge crosses S(p, r0), sorted.
std::vector<double> sphere_crossings(const TransportPath& g, const Edge& e, const ModelPoint& p, double r0) {
  auto f = [&](double t) { return dist_along(g, e, p, t) - r0 - kBoundarySlack; };
  std::vector<double> ts(kEdgeSamples + 1);
  std::vector<double> fs(kEdgeSamples + 1);
  for (int j = 0; j <= kEdgeSamples; ++j) {
    ts[j] = static_cast<double>(j) / kEdgeSamples;
    fs[j] = f(ts[j]);
  }
  std::vector<double> roots;
  auto add_root = [&](double t) {
    if (t > kBisectionTolerance && t < 1.0 - kBisectionTolerance) roots.push_back(t);
  };
  for (int j = 0; j < kEdgeSamples; ++j) {
    const bool in0 = fs[j] <= 0.0;
    const bool in1 = fs[j + 1] <= 0.0;
    if (in0 != in1) {
      add_root(bisect(f, ts[j], ts[j + 1]));
      continue;
    }
    if (in0) continue;
    // Both samples outside: the edge may still dip into the ball in between.
    const double tm = golden_min(f, ts[j], ts[j + 1]);
    if (f(tm) < 0.0) {
      add_root(bisect(f, ts[j], tm));
      add_root(bisect(f, tm, ts[j + 1]));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return b - a < kBisectionTolerance; }),
              roots.end());
  return roots;
}

}  // namespace

TransportPath::TransportPath(std::vector<ModelPoint> vertices, std::vector<Edge> edges, AtomicMeasure source,
                             AtomicMeasure sink)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), source_(std::move(source)), sink_(std::move(sink)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.tail >= vertices_.size() || e.head >= vertices_.size()) {
      throw ValidationError("edge " + std::to_string(i) + " references a missing vertex");
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw ValidationError("edge " + std::to_string(i) + " has nonpositive weight");
    }
  }
  const Curvature k = curvature();
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].curvature() != k) {
      throw ValidationError("vertex " + std::to_string(v) + " has a different curvature tag");
    }
  }
  if ((!source_.empty() && source_.curvature() != k) || (!sink_.empty() && sink_.curvature() != k)) {
    throw ValidationError("measures and vertices carry different curvature tags");
  }
}

Curvature TransportPath::curvature() const {
  if (!vertices_.empty()) return vertices_.front().curvature();
  if (!source_.empty()) return source_.curvature();
  return sink_.curvature();
}

double TransportPath::edge_length(std::size_t e) const {
  return distance(vertices_[edges_[e].tail], vertices_[edges_[e].head]);
}

TransportPath TransportPath::scaled(double factor) const {
  std::vector<Edge> edges = edges_;
  for (Edge& e : edges) e.weight *= factor;
  return TransportPath(vertices_, std::move(edges), source_.scaled(factor), sink_.scaled(factor));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].message;
  }
  return os.str();
}

ValidationReport validate(const TransportPath& g) {
  ValidationReport report;
  const std::size_t n = g.vertices().size();

  // Acyclicity by Kahn's algorithm.
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::vector<std::size_t>> in(n);
  for (const Edge& e : g.edges()) {
    ++indegree[e.head];
    out[e.tail].push_back(e.head);
    in[e.head].push_back(e.tail);
  }
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::vector<bool> removed(n, false);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    removed[v] = true;
    ++seen;
    for (std::size_t w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  if (seen < n) {
    // Every remaining vertex has a remaining predecessor; walk back to a repeat.
    std::size_t v = 0;
    while (removed[v]) ++v;
    std::vector<std::size_t> order;
    std::vector<int> position(n, -1);
    while (position[v] < 0) {
      position[v] = static_cast<int>(order.size());
      order.push_back(v);
      for (std::size_t u : in[v]) {
        if (!removed[u]) {
          v = u;
          break;
        }
      }
    }
    std::vector<std::size_t> cycle(order.begin() + position[v], order.end());
    std::reverse(cycle.begin(), cycle.end());
    std::ostringstream os;
    os << "directed cycle through vertices";
    for (std::size_t c : cycle) os << ' ' << c;
    report.violations.push_back({Violation::Kind::cycle, cycle, 0.0, os.str()});
  }

  // Balance: outflow - inflow = source mass - sink mass at every vertex.
  std::vector<double> expected(n, 0.0);
  auto place = [&](const AtomicMeasure& mu, double sign, const char* label) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < n; ++v) {
        const double d = distance(g.vertices()[v], mu[i].location);
        if (d < best_d) {
          best_d = d;
          best = v;
        }
      }
      if (best == n || best_d > AtomicMeasure::merge_tolerance) {
        report.violations.push_back({Violation::Kind::missing_atom,
                                     {},
                                     0.0,
                                     std::string(label) + " atom " + std::to_string(i) + " is not a vertex"});
        continue;
      }
      expected[best] += sign * mu[i].mass;
    }
  };
  place(g.source(), 1.0, "source");
  place(g.sink(), -1.0, "sink");

  std::vector<double> net(n, 0.0);
  for (const Edge& e : g.edges()) {
    net[e.tail] += e.weight;
    net[e.head] -= e.weight;
  }
  const double tol = kBalanceTolerance * std::max(1.0, std::max(g.source().total_mass(), g.sink().total_mass()));
  for (std::size_t v = 0; v < n; ++v) {
    const double excess = net[v] - expected[v];
    if (std::abs(excess) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "balance violated at vertex " << v << " (outflow - inflow = " << net[v] << ", expected " << expected[v]
         << ")";
      report.violations.push_back({Violation::Kind::imbalance, {v}, excess, os.str()});
    }
  }
  return report;
}

double cost_alpha(const TransportPath& g, double alpha) {
  if (!(alpha <= 1.0)) throw DomainError("cost exponent alpha must be at most 1");
  const ValidationReport report = validate(g);
  if (!report.ok()) throw ValidationError("invalid transport path: " + report.summary());
  double cost = 0.0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    cost += std::pow(g.edges()[e].weight, alpha) * g.edge_length(e);
  }
  return cost;
}

DistanceRange edge_distance_range(const TransportPath& g, std::size_t index, const ModelPoint& p) {
  const Edge& e = g.edges().at(index);
  auto f = [&](double t) { return dist_along(g, e, p, t); };
  std::vector<double> fs(kEdgeSamples + 1);
  for (int j = 0; j <= kEdgeSamples; ++j) fs[j] = f(static_cast<double>(j) / kEdgeSamples);
  const auto lo_it = std::min_element(fs.begin(), fs.end());
  const auto hi_it = std::max_element(fs.begin(), fs.end());
  auto bracket = [](long j) {
    return std::pair{static_cast<double>(std::max(j - 1, 0L)) / kEdgeSamples,
                     static_cast<double>(std::min(j + 1, static_cast<long>(kEdgeSamples))) / kEdgeSamples};
  };
  const auto [a0, a1] = bracket(lo_it - fs.begin());
  const auto [b0, b1] = bracket(hi_it - fs.begin());
  DistanceRange range;
  range.min = std::min(*lo_it, f(golden_min(f, a0, a1)));
  range.max = std::max(*hi_it, f(golden_min([&](double t) { return -f(t); }, b0, b1)));
  return range;
}

TransportPath restrict_to_ball(const TransportPath& g, const ModelPoint& p, double r0) {
  if (!(r0 > 0.0)) throw DomainError("ball radius must be positive");
  const std::size_t n = g.vertices().size();
  std::vector<bool> inside(n);
  for (std::size_t v = 0; v < n; ++v) inside[v] = distance(p, g.vertices()[v]) <= r0 + kBoundarySlack;

  struct Piece {
    std::size_t edge;
    double t0;
    double t1;
  };
  std::vector<Piece> pieces;
  bool untouched = std::all_of(inside.begin(), inside.end(), [](bool b) { return b; });
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    std::vector<double> cuts = sphere_crossings(g, e, p, r0);
    if (!cuts.empty()) untouched = false;
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(1.0);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double t0 = cuts[j];
      const double t1 = cuts[j + 1];
      if (t1 - t0 <= kBisectionTolerance) continue;
      if (dist_along(g, e, p, 0.5 * (t0 + t1)) <= r0 + kBoundarySlack) pieces.push_back({i, t0, t1});
    }
  }
  if (untouched) return g;

  std::vector<ModelPoint> vertices;
  std::map<std::size_t, std::size_t> kept;
  auto endpoint = [&](const Edge& e, double t) -> std::size_t {
    if (t == 0.0 || t == 1.0) {
      const std::size_t v = t == 0.0 ? e.tail : e.head;
      auto [it, fresh] = kept.try_emplace(v, vertices.size());
      if (fresh) vertices.push_back(g.vertices()[v]);
      return it->second;
    }
    vertices.push_back(geodesic_point(g.vertices()[e.tail], g.vertices()[e.head], t));
    return vertices.size() - 1;
  };
  std::vector<Edge> edges;
  for (const Piece& piece : pieces) {
    const Edge& e = g.edges()[piece.edge];
    const std::size_t a = endpoint(e, piece.t0);
    const std::size_t b = endpoint(e, piece.t1);
    edges.push_back({a, b, e.weight});
  }

  std::vector<double> net(vertices.size(), 0.0);
  for (const Edge& e : edges) {
    net[e.tail] += e.weight;
    net[e.head] -= e.weight;
  }
  const double tol = 1e-12 * std::max(1.0, g.source().total_mass());
  std::vector<Atom> sources;
  std::vector<Atom> sinks;
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (net[v] > tol) sources.push_back({vertices[v], net[v]});
    if (net[v] < -tol) sinks.push_back({vertices[v], -net[v]});
  }
  return TransportPath(std::move(vertices), std::move(edges), AtomicMeasure(std::move(sources)),
                       AtomicMeasure(std::move(sinks)));
}

double sphere_slice_bound(const TransportPath& g, const ModelPoint& p, double r0, double alpha, int samples) {
  if (samples < 2) throw DomainError("slice bound needs at least two samples");
  if (!(r0 >= 0.0)) throw DomainError("ball radius must be nonnegative");
  std::vector<DistanceRange> ranges;
  std::vector<double> weights;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    ranges.push_back(edge_distance_range(g, e, p));
    weights.push_back(std::pow(g.edges()[e].weight, alpha));
  }
  const double h = r0 / samples;
  double total = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double r = (j + 0.5) * h;
    double slice = 0.0;
    for (std::size_t e = 0; e < ranges.size(); ++e) {
      if (ranges[e].min <= r && r <= ranges[e].max) slice += weights[e];
    }
    total += slice;
  }
  return total * h;
}

}  // namespace ramified

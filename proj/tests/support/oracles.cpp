#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace ramified::testing {
namespace {

double term(double gamma, double alpha, double d) { return gamma > 1e-15 ? std::pow(gamma, alpha) * d : 0.0; }

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

ModelPoint random_point(Rng& rng, Curvature k, double radius) {
  const double r = rng.uniform(0.0, radius);
  const double phi = rng.uniform(-std::numbers::pi, std::numbers::pi);
  if (k.value() == 0.0) return ModelPoint::plane(r * std::cos(phi), r * std::sin(phi));
  return ModelPoint::from_polar(k, r, phi);
}

AtomicMeasure random_measure(Rng& rng, Curvature k, std::size_t atoms, double radius, double total, double min_gap) {
  std::vector<ModelPoint> points;
  while (points.size() < atoms) {
    const ModelPoint p = random_point(rng, k, radius);
    if (std::all_of(points.begin(), points.end(), [&](const ModelPoint& q) { return distance(p, q) >= min_gap; })) {
      points.push_back(p);
    }
  }
  std::vector<double> masses;
  for (std::size_t i = 0; i < atoms; ++i) masses.push_back(rng.uniform(0.2, 1.0));
  const double sum = std::accumulate(masses.begin(), masses.end(), 0.0);
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms; ++i) out.push_back({points[i], masses[i] * total / sum});
  return AtomicMeasure(std::move(out));
}

double plan_grid_2x2(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, int steps) {
  const double m1 = a[0].mass, m2 = a[1].mass, n1 = b[0].mass;
  double d[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d[i][j] = distance(a[i].location, b[j].location);
  const double lo = std::max(0.0, n1 - m2);
  const double hi = std::min(m1, n1);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= steps; ++s) {
    const double g11 = s == steps ? hi : lo + (hi - lo) * s / steps;
    const double g12 = m1 - g11;
    const double g21 = n1 - g11;
    const double g22 = m2 - g21;
    best = std::min(best, term(g11, alpha, d[0][0]) + term(g12, alpha, d[0][1]) + term(g21, alpha, d[1][0]) +
                              term(std::max(g22, 0.0), alpha, d[1][1]));
  }
  return best;
}

double plan_grid_2x3(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, int steps) {
  const double m1 = a[0].mass;
  const double n[3] = {b[0].mass, b[1].mass, b[2].mass};
  double d[2][3];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) d[i][j] = distance(a[i].location, b[j].location);
  auto cost = [&](double g11, double g12) {
    const double g13 = m1 - g11 - g12;
    const double r[3] = {n[0] - g11, n[1] - g12, n[2] - g13};
    if (g13 < -1e-12 || r[0] < -1e-12 || r[1] < -1e-12 || r[2] < -1e-12) {
      return std::numeric_limits<double>::infinity();
    }
    double c = term(g11, alpha, d[0][0]) + term(g12, alpha, d[0][1]) + term(std::max(g13, 0.0), alpha, d[0][2]);
    for (int j = 0; j < 3; ++j) c += term(std::max(r[j], 0.0), alpha, d[1][j]);
    return c;
  };
  double best = std::numeric_limits<double>::infinity();
  const double lo11 = std::max(0.0, m1 - n[1] - n[2]);
  const double hi11 = std::min(m1, n[0]);
  // The polygon's corners lie on the lines g11 = 0, g11 = n1, g12 = 0,
  // g12 = n2, g13 = 0 and g13 = n3; their g11 coordinates join the grid so
  // the scan reaches every corner.
  std::vector<double> xs;
  for (int s = 0; s <= steps; ++s) xs.push_back(s == steps ? hi11 : lo11 + (hi11 - lo11) * s / steps);
  for (double x : {m1 - n[1], m1 - n[2]}) {
    if (x > lo11 && x < hi11) xs.push_back(x);
  }
  for (double g11 : xs) {
    // Feasible g12 given g11: g12 <= n2, g12 <= m1 - g11, g13 = m1 - g11 - g12 <= n3.
    const double lo12 = std::max(0.0, m1 - g11 - n[2]);
    const double hi12 = std::min(n[1], m1 - g11);
    if (lo12 > hi12 + 1e-15) continue;
    for (int t = 0; t <= steps; ++t) {
      const double g12 = t == steps ? hi12 : lo12 + (hi12 - lo12) * t / steps;
      best = std::min(best, cost(g11, g12));
    }
  }
  return best;
}

std::pair<double, double> y_height_scan(double alpha) {
  const double w = 2.0 * std::pow(0.5, alpha);
  auto f = [&](double h) { return w * std::sqrt(1.0 + h * h) + (2.0 - h); };
  const int steps = 200000;
  int best = 0;
  for (int s = 1; s <= steps; ++s) {
    if (f(2.0 * s / steps) < f(2.0 * best / steps)) best = s;
  }
  double lo = 2.0 * std::max(best - 1, 0) / steps;
  double hi = 2.0 * std::min(best + 1, steps) / steps;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double x1 = hi - g * (hi - lo);
    const double x2 = lo + g * (hi - lo);
    if (f(x1) <= f(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  const double h = (lo + hi) / 2.0;
  return {h, f(h)};
}

double y_height_closed_form(double alpha) {
  const double s = std::pow(2.0, alpha - 1.0);
  return s / std::sqrt(1.0 - s * s);
}

std::size_t steiner_topology_count(std::size_t n) {
  if (n <= 1) return n;
  std::size_t total = 0;
  for (std::size_t s = 0; s + 2 <= std::max<std::size_t>(n, 2); ++s) {
    const std::size_t nodes = n + s;
    const std::size_t len = nodes - 2;
    std::vector<std::size_t> seq(len, 0);
    std::size_t count = 0;
    while (true) {
      std::vector<std::size_t> degree(nodes, 1);
      for (std::size_t x : seq) ++degree[x];
      bool ok = true;
      for (std::size_t j = n; j < nodes; ++j) ok = ok && degree[j] >= 3;
      if (ok) ++count;
      std::size_t pos = 0;
      while (pos < len && ++seq[pos] == nodes) seq[pos++] = 0;
      if (pos == len) break;
    }
    total += count / factorial(s);
  }
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> brute_canonical_form(
    std::size_t terminals, std::size_t branches, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    bool relabel_terminals) {
  std::vector<std::size_t> tp(terminals), bp(branches);
  std::iota(tp.begin(), tp.end(), 0);
  std::iota(bp.begin(), bp.end(), terminals);
  std::vector<std::pair<std::size_t, std::size_t>> best;
  do {
    do {
      std::vector<std::pair<std::size_t, std::size_t>> mapped;
      auto map = [&](std::size_t v) { return v < terminals ? tp[v] : bp[v - terminals]; };
      for (const auto& [u, v] : edges) mapped.emplace_back(std::min(map(u), map(v)), std::max(map(u), map(v)));
      std::sort(mapped.begin(), mapped.end());
      if (best.empty() || mapped < best) best = mapped;
    } while (std::next_permutation(bp.begin(), bp.end()));
  } while (relabel_terminals && std::next_permutation(tp.begin(), tp.end()));
  return best;
}

bool has_directed_cycle(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  std::vector<std::vector<std::size_t>> out(vertices);
  for (const auto& [u, v] : arcs) out[u].push_back(v);
  std::vector<int> color(vertices, 0);
  std::function<bool(std::size_t)> visit = [&](std::size_t u) {
    color[u] = 1;
    for (std::size_t v : out[u]) {
      if (color[v] == 1) return true;
      if (color[v] == 0 && visit(v)) return true;
    }
    color[u] = 2;
    return false;
  };
  for (std::size_t u = 0; u < vertices; ++u) {
    if (color[u] == 0 && visit(u)) return true;
  }
  return false;
}

double assignment_cost(const std::vector<ModelPoint>& xs, const std::vector<ModelPoint>& ys) {
  std::vector<std::size_t> perm(ys.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) c += distance(xs[i], ys[perm[i]]);
    best = std::min(best, c / static_cast<double>(xs.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace ramified::testing

#include "ramified/solver.hpp"

#include "ramified/error.hpp"
#include "ramified/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>

namespace ramified {
namespace {

constexpr int kCentroidPasses = 20;
// Perturbation radius of restarts, as a fraction of the terminal spread.
constexpr double kRestartSpread = 0.25;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Site {
  ModelPoint location;
  double net = 0.0;
};

// Atom locations of a (positive) and b (negative) with coincident atoms merged.
std::vector<Site> net_sites(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::vector<Site> sites;
  auto add = [&](const AtomicMeasure& mu, double sign) {
    for (const Atom& atom : mu.atoms()) {
      auto it = std::find_if(sites.begin(), sites.end(), [&](const Site& s) {
        return distance(s.location, atom.location) <= AtomicMeasure::merge_tolerance;
      });
      if (it == sites.end()) {
        sites.push_back({atom.location, sign * atom.mass});
      } else {
        it->net += sign * atom.mass;
      }
    }
  };
  add(a, 1.0);
  add(b, -1.0);
  return sites;
}

std::pair<AtomicMeasure, AtomicMeasure> split_sites(const std::vector<Site>& sites, double tol) {
  std::vector<Atom> plus;
  std::vector<Atom> minus;
  for (const Site& s : sites) {
    if (s.net > tol) plus.push_back({s.location, s.net});
    if (s.net < -tol) minus.push_back({s.location, -s.net});
  }
  return {AtomicMeasure(std::move(plus)), AtomicMeasure(std::move(minus))};
}

ModelPoint weighted_centroid(const std::vector<ModelPoint>& points, const std::vector<double>& weights) {
  ModelPoint c = points.front();
  double total = weights.front();
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += weights[i];
    c = geodesic_point(c, points[i], weights[i] / total);
  }
  return c;
}

double tree_cost(const std::vector<ModelPoint>& nodes, const std::vector<Edge>& arcs, double alpha) {
  double cost = 0.0;
  for (const Edge& e : arcs) cost += std::pow(e.weight, alpha) * distance(nodes[e.tail], nodes[e.head]);
  return cost;
}

struct Neighbor {
  std::size_t node;
  double weight;
};

struct RunResult {
  std::vector<ModelPoint> nodes;
  double cost = kInf;
  int sweeps = 0;
  bool converged = false;
};

RunResult relocate(std::vector<ModelPoint> nodes, const std::vector<Edge>& arcs,
                   const std::vector<std::vector<Neighbor>>& neighbors, std::size_t terminals, double alpha,
                   const SolverOptions& options) {
  RunResult run;
  double prev = tree_cost(nodes, arcs, alpha);
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    for (std::size_t b = terminals; b < nodes.size(); ++b) {
      std::vector<FermatTerm> terms;
      for (const Neighbor& n : neighbors[b]) terms.push_back({nodes[n.node], n.weight});
      nodes[b] = weighted_fermat_point(terms, nodes[b], options.fermat).point;
    }
    const double cur = tree_cost(nodes, arcs, alpha);
    run.sweeps = sweep;
    if (prev - cur <= options.sweep_tolerance * prev) {
      run.converged = true;
      prev = std::min(prev, cur);
      break;
    }
    prev = cur;
  }
  run.cost = tree_cost(nodes, arcs, alpha);
  run.nodes = std::move(nodes);
  return run;
}

// Uniform double in [0, 1) from the top 53 bits; portable across libraries.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Merges nodes joined by edges shorter than the contraction length. A branch
// merges into a terminal; two branches merge into the lower id; terminals
// are never merged with each other.
OptimizedTree contract(const std::vector<ModelPoint>& nodes, const std::vector<Edge>& arcs, std::size_t terminals,
                       double alpha, double min_length) {
  std::vector<std::size_t> root(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) root[v] = v;
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (const Edge& e : arcs) {
    if (distance(nodes[e.tail], nodes[e.head]) >= min_length) continue;
    const std::size_t u = find(e.tail);
    const std::size_t v = find(e.head);
    if (u == v || (u < terminals && v < terminals)) continue;
    if (u < v) {
      root[v] = u;
    } else {
      root[u] = v;
    }
  }
  std::vector<std::size_t> index(nodes.size(), nodes.size());
  OptimizedTree out;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (find(v) == v) {
      index[v] = out.nodes.size();
      out.nodes.push_back(nodes[v]);
    }
  }
  for (const Edge& e : arcs) {
    const std::size_t u = index[find(e.tail)];
    const std::size_t v = index[find(e.head)];
    if (u != v) out.arcs.push_back({u, v, e.weight});
  }
  out.cost = tree_cost(out.nodes, out.arcs, alpha);
  return out;
}

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha > 1.0) throw DomainError("alpha must be finite and at most 1");
}

}  // namespace

OptimizedTree optimize_positions(const Topology& topology, const std::vector<Edge>& arcs,
                                 const std::vector<ModelPoint>& terminals, double alpha, const SolverOptions& options,
                                 std::uint64_t stream) {
  check_alpha(alpha);
  const std::size_t t = topology.terminals;
  if (terminals.size() != t) throw DomainError("terminal positions do not match the topology");
  std::vector<ModelPoint> nodes(topology.node_count(), terminals.front());
  std::copy(terminals.begin(), terminals.end(), nodes.begin());
  if (topology.branches == 0) {
    OptimizedTree out{nodes, arcs, tree_cost(nodes, arcs, alpha), 0, true};
    return out;
  }

  std::vector<std::vector<Neighbor>> neighbors(nodes.size());
  for (const Edge& e : arcs) {
    const double w = std::pow(e.weight, alpha);
    neighbors[e.tail].push_back({e.head, w});
    neighbors[e.head].push_back({e.tail, w});
  }

  const ModelPoint center = weighted_centroid(terminals, std::vector<double>(t, 1.0));
  for (std::size_t b = t; b < nodes.size(); ++b) nodes[b] = center;
  for (int pass = 0; pass < kCentroidPasses; ++pass) {
    for (std::size_t b = t; b < nodes.size(); ++b) {
      std::vector<ModelPoint> pts;
      std::vector<double> ws;
      for (const Neighbor& n : neighbors[b]) {
        pts.push_back(nodes[n.node]);
        ws.push_back(n.weight);
      }
      nodes[b] = weighted_centroid(pts, ws);
    }
  }

  const Curvature k = terminals.front().curvature();
  double spread = 0.0;
  for (const ModelPoint& p : terminals) spread += distance(center, p);
  spread /= static_cast<double>(t) * k.length_scale();

  RunResult best;
  for (int restart = 0; restart <= options.restarts; ++restart) {
    std::vector<ModelPoint> start = nodes;
    if (restart > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                        static_cast<std::uint32_t>(restart)};
      std::mt19937_64 rng(seq);
      for (std::size_t b = t; b < start.size(); ++b) {
        const auto [e1, e2] = tangent_basis(start[b]);
        const double phi = 2.0 * std::numbers::pi * uniform(rng);
        const double rho = kRestartSpread * spread * uniform(rng);
        start[b] = exp_map(start[b], rho * (std::cos(phi) * e1 + std::sin(phi) * e2));
      }
    }
    try {
      RunResult run = relocate(std::move(start), arcs, neighbors, t, alpha, options);
      if (run.cost < best.cost) best = std::move(run);
    } catch (const DomainError&) {
      // A start near an antipodal configuration; other starts still count.
    }
  }
  if (!std::isfinite(best.cost)) throw DomainError("position optimization failed from every start");

  OptimizedTree out = contract(best.nodes, arcs, t, alpha, options.contraction_length);
  out.sweeps = best.sweeps;
  out.converged = best.converged;
  return out;
}

TransportPath optimize_positions(const Topology& topology, const AtomicMeasure& a, const AtomicMeasure& b, double alpha,
                                 const SolverOptions& options) {
  std::vector<ModelPoint> terminals;
  std::vector<double> supply;
  for (const Atom& x : a.atoms()) {
    terminals.push_back(x.location);
    supply.push_back(x.mass);
  }
  for (const Atom& y : b.atoms()) {
    terminals.push_back(y.location);
    supply.push_back(-y.mass);
  }
  const auto arcs = orient(topology, supply, 1e-12 * std::max(1.0, a.total_mass()));
  if (!arcs) throw DomainError("topology is infeasible for these masses");
  OptimizedTree tree = optimize_positions(topology, *arcs, terminals, alpha, options);
  return TransportPath(std::move(tree.nodes), std::move(tree.arcs), a, b);
}

double negative_estimate(const AtomicMeasure& a, const AtomicMeasure& b, double alpha) {
  if (!(alpha <= 0.0)) throw DomainError("negative estimate needs alpha <= 0");
  if (a.empty() || b.empty()) return 0.0;
  auto reach = [](const AtomicMeasure& from, const AtomicMeasure& to) {
    double worst = 0.0;
    for (const Atom& x : from.atoms()) {
      double nearest = kInf;
      for (const Atom& y : to.atoms()) nearest = std::min(nearest, distance(x.location, y.location));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::pow(a.total_mass(), alpha) * std::max(reach(a, b), reach(b, a));
}

double positive_estimate(const AtomicMeasure& a, const ModelPoint& p, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("positive estimate needs alpha in [0, 1)");
  // The supremum over r0 is approached as r0 rises to an atom distance.
  double best = 0.0;
  for (const Atom& x : a.atoms()) {
    const double d = distance(p, x.location);
    double outside = 0.0;
    for (const Atom& y : a.atoms()) {
      if (distance(p, y.location) >= d) outside += y.mass;
    }
    best = std::max(best, d * std::pow(outside, alpha));
  }
  return best;
}

double radial_imbalance_bound(const AtomicMeasure& a, const AtomicMeasure& b, double alpha) {
  check_alpha(alpha);
  const double total = std::max(a.total_mass(), b.total_mass());
  const double tol = 1e-12 * std::max(1.0, total);
  std::vector<ModelPoint> centers;
  for (const Atom& x : a.atoms()) centers.push_back(x.location);
  for (const Atom& y : b.atoms()) centers.push_back(y.location);
  double best = 0.0;
  for (const ModelPoint& p : centers) {
    std::vector<std::pair<double, double>> events;
    for (const Atom& x : a.atoms()) events.emplace_back(distance(p, x.location), x.mass);
    for (const Atom& y : b.atoms()) events.emplace_back(distance(p, y.location), -y.mass);
    std::sort(events.begin(), events.end());
    double inside = 0.0;
    double integral = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      inside += events[i].second;
      if (i + 1 == events.size()) break;
      const double width = events[i + 1].first - events[i].first;
      const double gap = std::abs(inside);
      if (width <= 0.0 || gap <= tol) continue;
      integral += width * (alpha < 0.0 ? std::pow(total, alpha) : std::pow(gap, alpha));
    }
    best = std::max(best, integral);
  }
  return best;
}

double lower_bound(const AtomicMeasure& a, const AtomicMeasure& b, double alpha) {
  check_alpha(alpha);
  double bound = radial_imbalance_bound(a, b, alpha);
  if (alpha <= 0.0) bound = std::max(bound, negative_estimate(a, b, alpha));
  if (alpha >= 0.0 && alpha < 1.0) {
    if (b.size() == 1) bound = std::max(bound, positive_estimate(a, b[0].location, alpha));
    if (a.size() == 1) bound = std::max(bound, positive_estimate(b, a[0].location, alpha));
  }
  return bound;
}

SolveResult solve(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, Curvature k,
                  const SolverOptions& options) {
  check_alpha(alpha);
  if (a.empty() || b.empty()) throw ValidationError("source and sink measures must be nonempty");
  if (a.curvature() != k || b.curvature() != k) {
    throw DomainError("atom curvature tags do not match the requested curvature");
  }
  const double ta = a.total_mass();
  const double tb = b.total_mass();
  if (std::abs(ta - tb) > 1e-9 * std::max(ta, tb)) {
    throw ValidationError("total masses differ: " + std::to_string(ta) + " vs " + std::to_string(tb));
  }
  if (a.size() + b.size() > options.topology_limit) {
    throw LimitError("solver limited to m + l <= " + std::to_string(options.topology_limit) + ", got " +
                     std::to_string(a.size() + b.size()));
  }

  const double lambda = ta;
  const double lambda_alpha = std::pow(lambda, alpha);
  const AtomicMeasure an = normalize(a).first;
  const AtomicMeasure bn = normalize(b).first;
  const std::vector<Site> sites = net_sites(an, bn);
  constexpr double kNetTolerance = 1e-12;

  std::vector<std::size_t> term;  // site index of each terminal
  for (std::size_t s = 0; s < sites.size(); ++s) {
    if (std::abs(sites[s].net) > kNetTolerance) term.push_back(s);
  }
  const std::size_t n = term.size();

  SolveResult result;
  std::vector<ModelPoint> vertices;
  for (const Site& s : sites) vertices.push_back(s.location);
  std::vector<Edge> edges;
  double normalized_cost = 0.0;

  if (n > 0) {
    const std::uint32_t full = (1u << n) - 1u;
    std::vector<bool> balanced(full + 1, false);
    for (std::uint32_t s = 1; s <= full; ++s) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (s >> i & 1u) sum += sites[term[i]].net;
      }
      balanced[s] = std::popcount(s) >= 2 && std::abs(sum) <= kNetTolerance;
    }
    balanced[full] = true;

    std::map<std::size_t, std::vector<Topology>> topologies;
    struct Task {
      std::uint32_t subset;
      std::size_t topology;
      std::vector<Edge> arcs;
    };
    std::vector<Task> tasks;
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (!balanced[s]) continue;
      const auto size = static_cast<std::size_t>(std::popcount(s));
      auto& list = topologies[size];
      if (list.empty()) list = enumerate_topologies(size, options.topology_limit);
      std::vector<double> supply;
      for (std::size_t i = 0; i < n; ++i) {
        if (s >> i & 1u) supply.push_back(sites[term[i]].net);
      }
      for (std::size_t ti = 0; ti < list.size(); ++ti) {
        if (auto arcs = orient(list[ti], supply, kNetTolerance)) tasks.push_back({s, ti, std::move(*arcs)});
      }
    }
    result.topologies_searched = tasks.size();

    std::vector<std::atomic<double>> incumbent(full + 1);
    for (auto& x : incumbent) x.store(kInf);
    std::vector<OptimizedTree> trees(tasks.size());
    std::vector<char> solved(tasks.size(), 0);
    parallel_for(tasks.size(), thread_count(options.threads), [&](std::size_t i) {
      const Task& task = tasks[i];
      const Topology& topo = topologies.at(static_cast<std::size_t>(std::popcount(task.subset)))[task.topology];
      std::vector<ModelPoint> terminals;
      for (std::size_t j = 0; j < n; ++j) {
        if (task.subset >> j & 1u) terminals.push_back(sites[term[j]].location);
      }
      // Terminal-to-terminal edges have fixed cost: a lower bound for the tree.
      double fixed = 0.0;
      for (const Edge& e : task.arcs) {
        if (e.tail < topo.terminals && e.head < topo.terminals) {
          fixed += std::pow(e.weight, alpha) * distance(terminals[e.tail], terminals[e.head]);
        }
      }
      std::atomic<double>& bound = incumbent[task.subset];
      if (fixed > bound.load() * (1.0 + 1e-9)) return;
      const std::uint64_t stream = (static_cast<std::uint64_t>(task.subset) << 32) | task.topology;
      trees[i] = optimize_positions(topo, task.arcs, terminals, alpha, options, stream);
      solved[i] = 1;
      double cur = bound.load();
      while (trees[i].cost < cur && !bound.compare_exchange_weak(cur, trees[i].cost)) {
      }
    });

    auto tie = [](double x) { return std::isfinite(x) ? 1e-12 * std::max(1.0, std::abs(x)) : 0.0; };
    std::vector<double> tree_best(full + 1, kInf);
    std::vector<std::size_t> tree_task(full + 1, tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (!solved[i]) continue;
      const std::uint32_t s = tasks[i].subset;
      if (trees[i].cost < tree_best[s] - tie(tree_best[s])) {
        tree_best[s] = trees[i].cost;
        tree_task[s] = i;
      }
    }
    // Cheapest forest per balanced subset: one tree, or a split into two
    // balanced parts (the part holding the lowest terminal enumerated first).
    std::vector<double> best(full + 1, kInf);
    std::vector<std::uint32_t> split(full + 1, 0);
    for (std::uint32_t s = 1; s <= full; ++s) {
      if (!balanced[s]) continue;
      best[s] = tree_best[s];
      const std::uint32_t low = s & (~s + 1u);
      for (std::uint32_t part = (s - 1) & s; part != 0; part = (part - 1) & s) {
        if (!(part & low) || !balanced[part] || !balanced[s ^ part]) continue;
        const double cand = best[part] + best[s ^ part];
        if (cand < best[s] - tie(best[s])) {
          best[s] = cand;
          split[s] = part;
        }
      }
    }
    if (!std::isfinite(best[full])) throw Error("no feasible transport tree found");

    bool converged = true;
    std::vector<std::uint32_t> pending{full};
    std::vector<std::uint32_t> leaves;
    while (!pending.empty()) {
      const std::uint32_t s = pending.back();
      pending.pop_back();
      if (split[s] != 0) {
        pending.push_back(s ^ split[s]);
        pending.push_back(split[s]);
      } else {
        leaves.push_back(s);
      }
    }
    std::sort(leaves.begin(), leaves.end());
    for (std::uint32_t s : leaves) {
      const OptimizedTree& tree = trees[tree_task[s]];
      converged = converged && tree.converged;
      normalized_cost += tree.cost;
      std::vector<std::size_t> global;
      for (std::size_t j = 0; j < n; ++j) {
        if (s >> j & 1u) global.push_back(term[j]);
      }
      const std::size_t local_terminals = global.size();
      for (std::size_t v = local_terminals; v < tree.nodes.size(); ++v) {
        global.push_back(vertices.size());
        vertices.push_back(tree.nodes[v]);
      }
      for (const Edge& e : tree.arcs) edges.push_back({global[e.tail], global[e.head], e.weight * lambda});
    }
    result.converged = converged;
  }

  result.best = TransportPath(std::move(vertices), std::move(edges), a, b);
  const ValidationReport report = validate(result.best);
  if (!report.ok()) throw Error("solver produced an invalid path: " + report.summary());
  result.cost = lambda_alpha * normalized_cost;

  const auto [plus, minus] = split_sites(sites, kNetTolerance);
  double lb = plus.empty() ? 0.0 : lambda_alpha * lower_bound(plus, minus, alpha);
  // Tight bounds can exceed the cost by roundoff only.
  if (lb > result.cost && lb - result.cost <= 1e-12 * std::max(1.0, result.cost)) lb = result.cost;
  result.lower_bound = lb;
  result.angle_report = angle_audit(result.best, alpha);
  return result;
}

}  // namespace ramified

#include "ramified/topology.hpp"

#include "ramified/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ramified {
namespace {

std::vector<std::vector<std::size_t>> adjacency(const Topology& t) {
  std::vector<std::vector<std::size_t>> adj(t.node_count());
  for (const auto& [u, v] : t.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

// Shifts branch ids up by one to make room for terminal number `t.terminals`.
Topology with_new_terminal(const Topology& t) {
  Topology out{t.terminals + 1, t.branches, {}};
  auto shift = [&](std::size_t v) { return v < t.terminals ? v : v + 1; };
  for (const auto& [u, v] : t.edges) out.edges.emplace_back(shift(u), shift(v));
  return out;
}

// Extends every topology on terminals [0, n) by terminal n. Each topology on
// n + 1 terminals arises once: deleting terminal n (and suppressing a branch
// node left with degree 2) recovers a unique parent, and the four cases
// below are the four ways n can sit in the larger tree.
std::vector<Topology> extend(const std::vector<Topology>& parents) {
  std::vector<Topology> out;
  for (const Topology& parent : parents) {
    const Topology base = with_new_terminal(parent);
    const std::size_t t = parent.terminals;

    // Leaf attached to an existing node.
    for (std::size_t x = 0; x < base.node_count(); ++x) {
      if (x == t) continue;
      Topology c = base;
      c.edges.emplace_back(x, t);
      out.push_back(std::move(c));
    }
    for (std::size_t e = 0; e < base.edges.size(); ++e) {
      const auto [x, y] = base.edges[e];
      // Leaf hanging off a new branch node that splits edge e.
      {
        Topology c = base;
        const std::size_t s = c.node_count();
        ++c.branches;
        c.edges[e] = {x, s};
        c.edges.emplace_back(s, y);
        c.edges.emplace_back(s, t);
        out.push_back(std::move(c));
      }
      // The terminal itself splits edge e.
      {
        Topology c = base;
        c.edges[e] = {x, t};
        c.edges.emplace_back(t, y);
        out.push_back(std::move(c));
      }
    }
    // The terminal takes the place of an existing branch node.
    for (std::size_t b = t + 1; b < base.node_count(); ++b) {
      Topology c{base.terminals, base.branches - 1, {}};
      auto relabel = [&](std::size_t v) { return v == b ? t : (v > b ? v - 1 : v); };
      for (const auto& [u, v] : base.edges) c.edges.emplace_back(relabel(u), relabel(v));
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string rooted_code(const std::vector<std::vector<std::size_t>>& adj, std::size_t terminals, std::size_t v,
                        std::size_t from) {
  std::vector<std::string> children;
  for (std::size_t w : adj[v]) {
    if (w != from) children.push_back(rooted_code(adj, terminals, w, v));
  }
  std::sort(children.begin(), children.end());
  std::string code = v < terminals ? "(t" : "(b";
  for (const std::string& c : children) code += c;
  return code + ")";
}

}  // namespace

std::vector<Topology> enumerate_topologies(std::size_t terminals, std::size_t limit) {
  if (terminals > limit) {
    throw LimitError("topology enumeration limited to " + std::to_string(limit) + " terminals, got " +
                     std::to_string(terminals));
  }
  if (terminals == 0) return {};
  if (terminals == 1) return {Topology{1, 0, {}}};
  std::vector<Topology> current{Topology{2, 0, {{0, 1}}}};
  for (std::size_t n = 2; n < terminals; ++n) current = extend(current);
  return current;
}

std::optional<std::vector<Edge>> orient(const Topology& t, const std::vector<double>& supply, double tol) {
  if (supply.size() != t.terminals) throw DomainError("supply vector does not match terminal count");
  const std::size_t n = t.node_count();
  const auto adj = adjacency(t);
  std::vector<double> below(n, 0.0);
  for (std::size_t i = 0; i < t.terminals; ++i) below[i] = supply[i];

  // Iterative DFS from node 0 to get a parent array and a post-order.
  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  if (order.size() != n) throw DomainError("topology is not connected");

  std::vector<double> flow(n, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t v = *it;
    if (parent[v] != n) {
      flow[v] = below[v];
      below[parent[v]] += below[v];
    }
  }
  std::vector<Edge> arcs;
  for (const auto& [u, v] : t.edges) {
    // One endpoint is the parent of the other.
    const bool v_child = parent[v] == u;
    const std::size_t child = v_child ? v : u;
    const std::size_t up = v_child ? u : v;
    const double f = flow[child];
    if (std::abs(f) < tol) return std::nullopt;
    arcs.push_back(f > 0.0 ? Edge{child, up, f} : Edge{up, child, -f});
  }
  return arcs;
}

std::string shape_key(const Topology& t) {
  const std::size_t n = t.node_count();
  if (n == 0) return "";
  const auto adj = adjacency(t);
  // Centers: strip leaves layer by layer.
  std::vector<std::size_t> degree(n);
  std::vector<std::size_t> layer;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = adj[v].size();
    if (degree[v] <= 1) layer.push_back(v);
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    remaining -= layer.size();
    std::vector<std::size_t> next;
    for (std::size_t v : layer) {
      for (std::size_t w : adj[v]) {
        if (--degree[w] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::string best;
  for (std::size_t c : layer) {
    std::string code = rooted_code(adj, t.terminals, c, n);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

std::size_t count_topology_shapes(std::size_t terminals, std::size_t limit) {
  std::set<std::string> shapes;
  for (const Topology& t : enumerate_topologies(terminals, limit)) shapes.insert(shape_key(t));
  return shapes.size();
}

}  // namespace ramified

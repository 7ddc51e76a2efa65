#include "ramified/topology.hpp"
#include "ramified/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace ramified {
namespace {

bool is_tree(const Topology& t) {
  const std::size_t n = t.node_count();
  if (t.edges.size() + 1 != n) return false;
  std::vector<std::size_t> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = i;
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& [u, v] : t.edges) {
    if (find(u) == find(v)) return false;
    root[find(u)] = find(v);
  }
  return true;
}

TEST(EnumerateTopologies, SmallCases) {
  const auto one = enumerate_topologies(2);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].branches, 0u);
  EXPECT_EQ(one[0].edges.size(), 1u);
  // Three terminals: the star (Y) and a path through each terminal (V when
  // the middle terminal is the sink).
  EXPECT_EQ(enumerate_topologies(3).size(), 4u);
  EXPECT_EQ(count_topology_shapes(3), 2u);
}

TEST(EnumerateTopologies, CountsMatchPrueferOracle) {
  for (std::size_t n = 2; n <= 6; ++n) {
    EXPECT_EQ(enumerate_topologies(n).size(), testing::steiner_topology_count(n)) << n << " terminals";
  }
}

TEST(EnumerateTopologies, StructureAndDistinctness) {
  for (std::size_t n = 2; n <= 5; ++n) {
    std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen;
    for (const Topology& t : enumerate_topologies(n)) {
      ASSERT_TRUE(is_tree(t));
      EXPECT_EQ(t.terminals, n);
      EXPECT_LE(t.branches, n - 2 + (n < 2));
      std::vector<std::size_t> degree(t.node_count(), 0);
      for (const auto& [u, v] : t.edges) ++degree[u], ++degree[v];
      for (std::size_t b = n; b < t.node_count(); ++b) EXPECT_GE(degree[b], 3u);
      // Branch nodes are unlabeled: compare canonical forms over relabelings.
      EXPECT_TRUE(seen.insert(testing::brute_canonical_form(t.terminals, t.branches, t.edges)).second);
    }
  }
}

TEST(ShapeKey, MatchesBruteForceIsomorphism) {
  for (std::size_t n = 2; n <= 5; ++n) {
    std::map<std::string, std::set<std::vector<std::pair<std::size_t, std::size_t>>>> by_key;
    std::set<std::vector<std::pair<std::size_t, std::size_t>>> brute_shapes;
    for (const Topology& t : enumerate_topologies(n)) {
      // Forget terminal labels too: canonicalize over all relabelings.
      auto form = testing::brute_canonical_form(t.terminals, t.branches, t.edges, true);
      form.insert(form.begin(), {t.terminals, t.branches});
      brute_shapes.insert(form);
      by_key[shape_key(t)].insert(form);
    }
    EXPECT_EQ(by_key.size(), brute_shapes.size());
    for (const auto& [key, forms] : by_key) EXPECT_EQ(forms.size(), 1u) << key;
    EXPECT_EQ(count_topology_shapes(n), brute_shapes.size());
  }
}

TEST(EnumerateTopologies, LimitEnforced) {
  EXPECT_THROW(enumerate_topologies(8), LimitError);
  EXPECT_THROW(enumerate_topologies(5, 4), LimitError);
}

TEST(Orient, YAndInfeasible) {
  // Star: terminals 0, 1 supply 1/2 each, terminal 2 demands 1.
  Topology star{3, 1, {{0, 3}, {1, 3}, {2, 3}}};
  const auto arcs = orient(star, {0.5, 0.5, -1.0}, 1e-12);
  ASSERT_TRUE(arcs.has_value());
  double into_branch = 0.0;
  for (const Edge& e : *arcs) {
    if (e.head == 3) into_branch += e.weight;
    if (e.tail == 3) {
      EXPECT_EQ(e.head, 2u);
      EXPECT_DOUBLE_EQ(e.weight, 1.0);
    }
  }
  EXPECT_DOUBLE_EQ(into_branch, 1.0);
  // A leaf with zero supply would carry no flow.
  EXPECT_FALSE(orient(star, {1.0, 0.0, -1.0}, 1e-12).has_value());
}

TEST(TopologyProperty, OrientedFlowsBalance) {
  testing::Rng rng(61);
  for (std::size_t n = 2; n <= 5; ++n) {
    for (const Topology& t : enumerate_topologies(n)) {
      std::vector<double> supply(n);
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        supply[i] = rng.uniform(0.1, 1.0) * (rng.coin() ? 1.0 : -1.0);
        sum += supply[i];
      }
      supply[n - 1] = -sum;
      const auto arcs = orient(t, supply, 1e-12);
      if (!arcs) continue;
      std::vector<double> net(t.node_count(), 0.0);
      for (const Edge& e : *arcs) {
        EXPECT_GT(e.weight, 0.0);
        net[e.tail] += e.weight;
        net[e.head] -= e.weight;
      }
      for (std::size_t v = 0; v < t.node_count(); ++v) {
        EXPECT_NEAR(net[v], v < n ? supply[v] : 0.0, 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace ramified

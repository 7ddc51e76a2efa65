#pragma once

#include "ramified/transport_path.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ramified {

/// Undirected tree on labeled terminals plus unlabeled branch nodes of
/// degree at least 3. Node ids: terminals [0, terminals), then branches.
struct Topology {
  std::size_t terminals = 0;
  std::size_t branches = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t node_count() const { return terminals + branches; }
};

/// Largest terminal count accepted by enumerate_topologies by default.
inline constexpr std::size_t kTopologyLimit = 7;

/// Every Steiner tree topology on `terminals` labeled terminals, each exactly
/// once. Terminals may have any degree; branch nodes have degree >= 3, so
/// there are at most terminals - 2 of them. Counts for 2, 3, 4, 5 terminals
/// are 1, 4, 32, 396. Throws LimitError above `limit`.
std::vector<Topology> enumerate_topologies(std::size_t terminals, std::size_t limit = kTopologyLimit);

/// Directs the edges of t so mass flows from positive to negative supply.
/// Each edge carries the net supply on its far side; returns nullopt when
/// some edge would carry less than tol (the topology is infeasible).
std::optional<std::vector<Edge>> orient(const Topology& t, const std::vector<double>& supply, double tol);

/// Canonical string of the unlabeled tree shape, terminals and branch nodes
/// distinguished. Equal strings iff the shapes are isomorphic.
std::string shape_key(const Topology& t);

/// Number of distinct unlabeled shapes among enumerate_topologies(terminals):
/// 1 for two terminals, 2 (path and star) for three.
std::size_t count_topology_shapes(std::size_t terminals, std::size_t limit = kTopologyLimit);

}  // namespace ramified

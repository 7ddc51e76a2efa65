#pragma once

#include "ramified/audit.hpp"
#include "ramified/fermat.hpp"
#include "ramified/measure.hpp"
#include "ramified/topology.hpp"
#include "ramified/transport_path.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ramified {

struct SolverOptions {
  /// Largest m + l accepted.
  std::size_t topology_limit = kTopologyLimit;
  int max_sweeps = 500;
  /// Perturbed restarts of the position optimization beyond the first run.
  int restarts = 3;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means thread_count().
  std::size_t threads = 0;
  /// Stop sweeping once the relative cost decrease falls below this.
  double sweep_tolerance = 1e-10;
  /// Edges shorter than this are contracted after optimization.
  double contraction_length = 1e-8;
  FermatOptions fermat;
};

/// A tree with optimized branch positions. Nodes are the topology's
/// terminals (same ids) followed by the surviving branch nodes.
struct OptimizedTree {
  std::vector<ModelPoint> nodes;
  std::vector<Edge> arcs;
  double cost = 0.0;
  int sweeps = 0;
  bool converged = true;
};

/// Places the branch nodes of an oriented topology to locally minimize
/// sum w^alpha * length. Branches start at the weighted geodesic centroid
/// of their neighbors; each run relocates branch nodes cyclically to the
/// weighted Fermat point of their neighbors. Runs from `restarts` perturbed
/// starts as well and keeps the cheapest; short edges are then contracted.
/// `stream` separates random streams of independent calls.
OptimizedTree optimize_positions(const Topology& topology, const std::vector<Edge>& arcs,
                                 const std::vector<ModelPoint>& terminals, double alpha,
                                 const SolverOptions& options = {}, std::uint64_t stream = 0);

/// Convenience form: terminals are the atoms of a followed by those of b.
/// Throws DomainError when the topology is infeasible for these masses.
TransportPath optimize_positions(const Topology& topology, const AtomicMeasure& a, const AtomicMeasure& b, double alpha,
                                 const SolverOptions& options = {});

struct SolveResult {
  TransportPath best;
  /// M_alpha(best): an upper bound for d_alpha(a, b).
  double cost = 0.0;
  /// Graph-independent lower bound for d_alpha(a, b).
  double lower_bound = 0.0;
  /// Feasible (terminal subset, topology) pairs considered.
  std::size_t topologies_searched = 0;
  bool converged = true;
  std::vector<AngleRecord> angle_report;
};

/// alpha-optimal transport path search between atomic measures of equal
/// mass. Coincident source and sink atoms are netted; the optimum is a
/// forest, each tree joining a sub-collection of terminals whose supplies
/// balance, so every balanced terminal subset is searched over all tree
/// topologies and the cheapest partition is kept. Results are identical for
/// any thread count.
SolveResult solve(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, Curvature k,
                  const SolverOptions& options = {});

/// For alpha <= 0: ||a||^alpha times the largest distance from a source
/// site to the nearest sink site (or vice versa). Every edge carries at most
/// ||a||, and mass leaving a site crosses every sphere around it up to the
/// nearest opposite site.
double negative_estimate(const AtomicMeasure& a, const AtomicMeasure& b, double alpha);

/// For 0 <= alpha < 1: sup over r0 of r0 * (mass of a outside B(p, r0))^alpha,
/// a lower bound for d_alpha(a, ||a|| delta_p).
double positive_estimate(const AtomicMeasure& a, const ModelPoint& p, double alpha);

/// Integral over r of |a(B(p, r)) - b(B(p, r))|^alpha, maximized over the
/// atom locations p (for alpha < 0 the integrand is ||a||^alpha wherever the
/// imbalance is nonzero). A lower bound for d_alpha(a, b), alpha <= 1.
double radial_imbalance_bound(const AtomicMeasure& a, const AtomicMeasure& b, double alpha);

/// Maximum of the applicable estimates above.
double lower_bound(const AtomicMeasure& a, const AtomicMeasure& b, double alpha);

}  // namespace ramified

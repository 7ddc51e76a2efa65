#pragma once

// Independent reference computations and random generators shared by the
// unit and acceptance suites. None of these reuse library algorithms beyond
// distance().

#include "ramified/geometry.hpp"
#include "ramified/measure.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ramified::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  bool coin() { return index(2) == 1; }

 private:
  std::mt19937_64 engine_;
};

/// Uniform polar placement within `radius` of the chart base point.
ModelPoint random_point(Rng& rng, Curvature k, double radius);

/// `atoms` atoms at pairwise distance >= min_gap with masses drawn from
/// [0.2, 1] and rescaled to `total`.
AtomicMeasure random_measure(Rng& rng, Curvature k, std::size_t atoms, double radius, double total = 1.0,
                             double min_gap = 0.05);

/// min H_alpha over the plans of a 2 x 2 instance: the polytope is a
/// segment in gamma_11, scanned on `steps` + 1 evenly spaced points.
double plan_grid_2x2(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, int steps = 200);

/// min H_alpha over the plans of a 2 x 3 instance: (gamma_11, gamma_12)
/// scanned on a (steps + 1)^2 grid, each row clipped to its feasible
/// interval with the interval ends included. The g11 coordinates of the
/// polytope's corners are scanned as well.
double plan_grid_2x3(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, int steps = 200);

/// Symmetric Y with sources (+-1, 0) of mass 1/2 and sink (0, -2): the
/// branch height h minimizing 2 (1/2)^alpha sqrt(1 + h^2) + (2 - h) over
/// [0, 2], by a fine scan followed by golden-section refinement.
std::pair<double, double> y_height_scan(double alpha);
/// Stationary point of the same function: sin of the half angle equals
/// 2^(alpha - 1). Valid for alpha < 1.
double y_height_closed_form(double alpha);

/// Number of Steiner topologies on n labeled terminals (branch nodes of
/// degree >= 3), counted from Pruefer sequences: labeled trees on n + s
/// nodes with the s branch labels forgotten.
std::size_t steiner_topology_count(std::size_t n);

/// Canonical form of an undirected tree with two node colors, by brute
/// force over relabelings of the branch nodes, and of the terminals too when
/// relabel_terminals is set.
std::vector<std::pair<std::size_t, std::size_t>> brute_canonical_form(
    std::size_t terminals, std::size_t branches, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    bool relabel_terminals = false);

/// Cycle detection by depth-first search with three colors.
bool has_directed_cycle(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& arcs);

/// For n sources and n sinks of mass 1/n each: min over permutations of
/// sum d(x_i, y_pi(i)) / n, the linear transport cost.
double assignment_cost(const std::vector<ModelPoint>& xs, const std::vector<ModelPoint>& ys);

}  // namespace ramified::testing

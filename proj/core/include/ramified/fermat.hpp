#pragma once

#include "ramified/geometry.hpp"

#include <vector>

namespace ramified {

struct FermatTerm {
  ModelPoint point;
  double weight = 0.0;
};

struct FermatOptions {
  int max_iterations = 2000;
  /// Armijo sufficient-decrease constant.
  double armijo = 1e-4;
  /// Backtracking shrink factor.
  double shrink = 0.5;
  /// First trial step as a fraction of the mean distance to the terms.
  double initial_step = 0.1;
  /// Stop once the gradient norm drops below this times the total weight.
  double gradient_tolerance = 1e-13;
};

struct FermatResult {
  ModelPoint point;
  /// Sum of weight * distance at `point`.
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Weighted geodesic Fermat point: minimizer of sum_i w_i d(x, p_i).
/// A term point is returned directly when it satisfies the subgradient
/// optimality test; otherwise Riemannian gradient descent with Armijo
/// backtracking runs from `start`.
FermatResult weighted_fermat_point(const std::vector<FermatTerm>& terms, const ModelPoint& start,
                                   const FermatOptions& options = {});

/// Sum of weight * distance from x to the terms.
double fermat_objective(const std::vector<FermatTerm>& terms, const ModelPoint& x);

}  // namespace ramified

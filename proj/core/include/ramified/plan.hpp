#pragma once

#include "ramified/measure.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <utility>
#include <vector>

namespace ramified {

/// Coupling gamma between the atoms of a (rows) and b (columns).
class TransportPlan {
 public:
  static constexpr double margin_tolerance = 1e-9;

  TransportPlan() = default;
  /// Throws ValidationError on negative entries or margins that differ from
  /// the row/column sums of gamma by more than margin_tolerance.
  TransportPlan(Eigen::MatrixXd gamma, std::vector<double> row_margins, std::vector<double> col_margins);

  const Eigen::MatrixXd& gamma() const { return gamma_; }
  const std::vector<double>& row_margins() const { return rows_; }
  const std::vector<double>& col_margins() const { return cols_; }
  /// Positive entries as (row, column) pairs in row-major order.
  std::vector<std::pair<std::size_t, std::size_t>> support() const;

 private:
  Eigen::MatrixXd gamma_;
  std::vector<double> rows_;
  std::vector<double> cols_;
};

/// Sum over positive entries of gamma_ij^alpha * d(x_i, y_j), alpha in [0, 1).
/// Throws ValidationError when the plan margins do not match a and b.
double h_alpha(const TransportPlan& gamma, const AtomicMeasure& a, const AtomicMeasure& b, double alpha);

struct JAlphaOptions {
  /// Largest admissible m + l.
  std::size_t limit = 12;
  /// Worker threads; 0 means thread_count().
  std::size_t threads = 0;
};

struct JAlphaResult {
  double value = 0.0;
  TransportPlan plan;
  /// Extreme points reached by the search after bound pruning. Varies with
  /// the thread schedule; value and plan do not.
  std::size_t extreme_points = 0;
};

/// Exact minimum of h_alpha over all plans between a and b. H_alpha is
/// concave for alpha in [0, 1), so the minimum sits at an extreme point of
/// the transportation polytope; these are the plans supported on forests and
/// are enumerated by branch and bound. Ties go to the lexicographically smallest
/// support.
JAlphaResult j_alpha(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, const JAlphaOptions& options = {});

}  // namespace ramified

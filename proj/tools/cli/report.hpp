#pragma once

#include "problem.hpp"

#include "ramified/dimension.hpp"
#include "ramified/plan.hpp"
#include "ramified/solver.hpp"
#include "ramified/transport_path.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ramified::cli {

using OrderedJson = nlohmann::ordered_json;

OrderedJson point_json(const ModelPoint& p);
OrderedJson path_json(const TransportPath& g);

/// Rebuilds the path stored under "path" in a solve result document.
TransportPath path_from_json(const nlohmann::json& doc);

/// Solve result: cost, lower bound, the path, and the angle, mass, degree
/// and lower-bound audits.
OrderedJson solve_report(const ProblemSpec& spec, const SolveResult& result);

/// J_alpha value and optimal plan; with a solve result, also the
/// d_alpha <= J_alpha cross-check.
OrderedJson plan_report(const ProblemSpec& spec, const JAlphaResult& plan, const SolveResult* solved = nullptr);

struct SweepRow {
  std::size_t index = 0;
  double alpha = 0.0;
  double curvature = 0.0;
  double cost = 0.0;
  double lower_bound = 0.0;
  /// Smallest audited comparison angle; NaN when the tree has no branch.
  double min_angle = 0.0;
  std::size_t max_degree = 0;
  /// Smallest separation / (2 r) over audited pairs; NaN without branches.
  double min_separation_ratio = 0.0;
  bool angle_ok = true;
  bool separation_ok = true;
  bool bound_ok = true;
  bool converged = true;
};

SweepRow sweep_row(std::size_t index, const ProblemSpec& spec, const SolveResult& result);
/// RFC 4180 CSV with a header row; reals use 17 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct DimensionRequest {
  std::string collection;
  std::size_t depth = 12;
  double sigma = 0.0;
  double lambda = 1.0;
  std::vector<double> alpha_grid;
  DimensionOptions options;
};

OrderedJson dimension_report(const DimensionRequest& request);

/// SVG 1.1 drawing of a path: the plane directly, the sphere by orthographic
/// projection onto the equatorial plane, the hyperbolic plane in the
/// Poincare disk.
std::string render_svg(const TransportPath& g);

/// Formats with 17 significant digits.
std::string format_real(double x);

}  // namespace ramified::cli

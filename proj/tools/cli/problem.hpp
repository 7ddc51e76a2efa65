#pragma once

#include "ramified/measure.hpp"
#include "ramified/plan.hpp"
#include "ramified/solver.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace ramified::cli {

/// Malformed input file or flag value (exit code 1).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A transport problem as read from a spec file.
///
/// Schema (UTF-8 JSON):
///   alpha       number, at most 1
///   curvature   number, default 0
///   sources, sinks
///               arrays of atoms; an atom is {"mass": m} plus either
///               "x", "y" (geodesic polar chart about the base point:
///               r = hypot(x, y), phi = atan2(y, x); exactly the plane for
///               curvature 0), "r", "phi", or "coords": [c0, c1, c2]
///               (embedding chart)
///   solver      optional {"topology_limit", "plan_limit", "max_sweeps",
///               "restarts", "seed"}
struct ProblemSpec {
  double alpha = 0.5;
  double curvature = 0.0;
  nlohmann::json sources = nlohmann::json::array();
  nlohmann::json sinks = nlohmann::json::array();
  SolverOptions solver;
  std::size_t plan_limit = JAlphaOptions{}.limit;
};

ProblemSpec parse_problem(const nlohmann::json& doc);
ProblemSpec load_problem(const std::string& path);

/// Atoms of one side at the spec's curvature. Throws ValidationError naming
/// the offending atom.
AtomicMeasure build_measure(const ProblemSpec& spec, const nlohmann::json& atoms, const std::string& side);

struct Instance {
  AtomicMeasure sources;
  AtomicMeasure sinks;
};

/// Both measures; checks alpha <= 1 and equal total masses.
Instance build_instance(const ProblemSpec& spec);

nlohmann::json read_json_file(const std::string& path);

}  // namespace ramified::cli

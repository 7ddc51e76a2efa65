#pragma once

#include "ramified/geometry.hpp"
#include "ramified/measure.hpp"
#include "ramified/transport_path.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ramified {

/// One cube of a nested collection. `parent` indexes the previous
/// generation (kNoParent in the first generation).
struct Cube {
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  std::size_t id = 0;
  std::size_t parent = kNoParent;
  ModelPoint rep;
  double diameter = 0.0;
  double mass = 0.0;
};

/// Hierarchy of cubes with diameters in [C1 sigma^n, C2 sigma^n] in
/// generation n = 1, 2, ...; generations()[g] holds generation n = g + 1.
class NestedCollection {
 public:
  /// Validates the diameter envelope, parent links, that every cube with a
  /// next generation has a child, and that child masses sum to the parent.
  /// Throws ValidationError.
  NestedCollection(double sigma, double c1, double c2, std::vector<std::vector<Cube>> generations);

  double sigma() const { return sigma_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  const std::vector<std::vector<Cube>>& generations() const { return generations_; }
  std::size_t depth() const { return generations_.size(); }
  /// Atomic approximation at generation n (1-based): cube masses at their
  /// representatives, zero-mass cubes dropped.
  AtomicMeasure measure_at(std::size_t n) const;

 private:
  double sigma_;
  double c1_;
  double c2_;
  std::vector<std::vector<Cube>> generations_;
};

/// Generalized Cantor collection on [0, 1] with ratio sigma < 1/2 (sigma =
/// 1/3 is the middle-thirds set, uniform masses 2^-n).
NestedCollection cantor_collection(std::size_t depth, double sigma = 1.0 / 3.0);
/// Dyadic intervals of [0, 1] with Lebesgue masses.
NestedCollection dyadic_collection(std::size_t depth);
/// Sierpinski carpet in [0, 1]^2: 8 children per square, masses 8^-n.
NestedCollection carpet_collection(std::size_t depth, double sigma = 1.0 / 3.0);
/// One cube per generation, all at the origin: a Dirac mass.
NestedCollection chain_collection(std::size_t depth, double sigma = 0.5);

/// Builds a collection by name: cantor, dyadic, carpet or chain. A
/// nonpositive sigma selects the default. Throws DomainError on an unknown
/// name.
NestedCollection make_collection(const std::string& type, std::size_t depth, double sigma = 0.0);

struct MinkowskiEstimate {
  /// Least-squares slope of log N_n against n log(1/sigma) over the last
  /// half of the generations.
  double dimension = 0.0;
  /// log N_n / (n log(1/sigma)) per generation.
  std::vector<double> ratios;
};

/// Requires at least three generations.
MinkowskiEstimate minkowski_dim(const NestedCollection& f);

struct EvenlyConcentratedResult {
  bool ok = true;
  /// First violating cube as (generation n, index), if any.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Every cube either has no brothers or has mass >= lambda / N_n.
EvenlyConcentratedResult evenly_concentrated(const NestedCollection& f, double lambda);

struct AdmissibleSequence {
  std::vector<AtomicMeasure> measures;
  /// step_paths[n] transports measures[n] to measures[n + 1].
  std::vector<TransportPath> step_paths;
  std::vector<double> step_costs;
};

/// a_n for n = 1..depth and the parent-to-children step paths; step cost is
/// the sum over children of mass^alpha * d(parent rep, child rep).
AdmissibleSequence build_admissible_sequence(const NestedCollection& f, double alpha, std::size_t depth);

enum class SeriesClass { summable, divergent, inconclusive };
std::string to_string(SeriesClass c);

struct SeriesDiagnostics {
  double alpha = 0.0;
  SeriesClass verdict = SeriesClass::inconclusive;
  std::vector<double> step_costs;
  /// Consecutive ratios step_costs[n + 1] / step_costs[n].
  std::vector<double> ratios;
};

struct DimensionOptions {
  /// Number of trailing ratios the ratio test inspects.
  std::size_t window = 10;
  /// Ratios below 1 - threshold are summable, above 1 + threshold divergent.
  double threshold = 1e-3;
  /// Worker threads; 0 means thread_count().
  std::size_t threads = 0;
};

/// Ratio test on the step costs of one sequence. At least three ratios are
/// needed; all-zero tails are summable.
SeriesDiagnostics classify_series(double alpha, std::vector<double> step_costs, const DimensionOptions& options = {});

struct DimensionBracket {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  /// For two collections: the first collection's diagnostics, then the
  /// second's.
  std::vector<SeriesDiagnostics> per_alpha;
};

/// Bracket on the transport dimension: upper = min 1/(1 - alpha) over
/// summable alphas, lower = max 1/(1 - alpha) over divergent ones. A
/// collection whose children all sit at their parents' representatives is
/// atomic and gets upper = 0.
DimensionBracket transport_dim_estimate(const NestedCollection& f, const std::vector<double>& alpha_grid,
                                        const DimensionOptions& options = {});

/// Bracket on the dimensional distance between the measures of two
/// collections: 0 for equal or atomic pairs, the larger bracket when one
/// side is atomic, otherwise alpha counts only when both series are
/// summable. Throws DomainError when every alpha is inconclusive.
DimensionBracket dimensional_distance_estimate(const NestedCollection& mu, const NestedCollection& nu,
                                               const std::vector<double>& alpha_grid,
                                               const DimensionOptions& options = {});

}  // namespace ramified

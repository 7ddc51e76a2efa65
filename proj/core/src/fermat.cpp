#include "ramified/fermat.hpp"

#include "ramified/error.hpp"

#include <cmath>

namespace ramified {
namespace {

// Unit-model distances below this count as coincidence with a term.
constexpr double kCoincident = 1e-14;

double unit_objective(const std::vector<FermatTerm>& terms, const ModelPoint& x) {
  const double scale = x.curvature().length_scale();
  double f = 0.0;
  for (const FermatTerm& t : terms) f += t.weight * distance(x, t.point) / scale;
  return f;
}

// Sum of unit vectors toward the terms, weighted, over terms not coincident
// with x; `pinned` collects the weight of the coincident ones. The objective
// decreases along `pull` at rate |pull| - pinned.
struct Pull {
  Eigen::Vector3d pull = Eigen::Vector3d::Zero();
  double pinned = 0.0;
};

Pull pull_at(const std::vector<FermatTerm>& terms, const ModelPoint& x) {
  const Curvature k = x.curvature();
  Pull p;
  for (const FermatTerm& t : terms) {
    const Eigen::Vector3d v = log_map(x, t.point);
    const double n = tangent_norm(k, v);
    if (n <= kCoincident) {
      p.pinned += t.weight;
    } else {
      p.pull += (t.weight / n) * v;
    }
  }
  return p;
}

}  // namespace

double fermat_objective(const std::vector<FermatTerm>& terms, const ModelPoint& x) {
  double f = 0.0;
  for (const FermatTerm& t : terms) f += t.weight * distance(x, t.point);
  return f;
}

FermatResult weighted_fermat_point(const std::vector<FermatTerm>& terms, const ModelPoint& start,
                                   const FermatOptions& options) {
  if (terms.empty()) throw DomainError("Fermat point needs at least one term");
  const Curvature k = start.curvature();
  double total_weight = 0.0;
  for (const FermatTerm& t : terms) {
    if (!(t.weight > 0.0)) throw DomainError("Fermat weights must be positive");
    total_weight += t.weight;
  }
  const double scale = k.length_scale();

  // A term is optimal when the pull of the others does not beat its weight.
  for (const FermatTerm& anchor : terms) {
    const Pull p = pull_at(terms, anchor.point);
    if (tangent_norm(k, p.pull) <= p.pinned * (1.0 + 1e-12)) {
      return {anchor.point, unit_objective(terms, anchor.point) * scale, 0, true};
    }
  }

  ModelPoint x = start;
  double f = unit_objective(terms, x);
  double mean = 0.0;
  for (const FermatTerm& t : terms) mean += distance(x, t.point) / scale;
  mean /= static_cast<double>(terms.size());
  double step = options.initial_step * mean;

  FermatResult result{x, f * scale, 0, false};
  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    const Pull p = pull_at(terms, x);
    const double pull_norm = tangent_norm(k, p.pull);
    const double slope = pull_norm - p.pinned;
    if (slope <= options.gradient_tolerance * total_weight) {
      result.converged = true;
      break;
    }
    const Eigen::Vector3d dir = p.pull / pull_norm;
    bool accepted = false;
    ModelPoint trial = x;
    double f_trial = f;
    for (double s = step; s > 1e-17; s *= options.shrink) {
      trial = exp_map(x, s * dir);
      f_trial = unit_objective(terms, trial);
      bool ok = f_trial <= f - options.armijo * s * slope;
      if (std::abs(f_trial - f) <= 1e-14 * std::abs(f)) {
        // Objective differences are at roundoff: accept only if the trial
        // has not passed the line minimum.
        const Eigen::Vector3d v = geodesic_velocity(x, dir, s);
        const Pull q = pull_at(terms, trial);
        ok = tangent_dot(k, q.pull, v) - q.pinned >= 0.0;
      }
      if (ok) {
        accepted = true;
        step = 2.0 * s;
        break;
      }
    }
    if (!accepted) {
      // Line search exhausted at machine precision.
      result.converged = true;
      break;
    }
    x = trial;
    f = f_trial;
  }
  result.point = x;
  result.value = f * scale;
  return result;
}

}  // namespace ramified

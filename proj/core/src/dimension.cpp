#include "ramified/dimension.hpp"

#include "ramified/error.hpp"
#include "ramified/parallel.hpp"

#include "point_lookup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ramified {
namespace {

constexpr double kRelTolerance = 1e-12;
constexpr std::size_t kMaxCubes = 5'000'000;

// Children of a cube as (mass, distance to the parent representative), per
// step n -> n + 1. Independent of alpha.
struct StepTerms {
  std::vector<std::vector<std::pair<double, double>>> steps;
};

StepTerms step_terms(const NestedCollection& f, std::size_t depth) {
  StepTerms terms;
  const auto& gens = f.generations();
  for (std::size_t g = 0; g + 1 < depth; ++g) {
    std::vector<std::pair<double, double>> step;
    for (const Cube& child : gens[g + 1]) {
      if (child.mass <= 0.0) continue;
      const double d = distance(gens[g][child.parent].rep, child.rep);
      if (d > AtomicMeasure::merge_tolerance) step.emplace_back(child.mass, d);
    }
    terms.steps.push_back(std::move(step));
  }
  return terms;
}

std::vector<double> costs_for(const StepTerms& terms, double alpha) {
  std::vector<double> costs;
  for (const auto& step : terms.steps) {
    double c = 0.0;
    for (const auto& [m, d] : step) c += std::pow(m, alpha) * d;
    costs.push_back(c);
  }
  return costs;
}

void check_grid(const std::vector<double>& grid) {
  for (double a : grid) {
    if (!(a < 1.0)) throw DomainError("alpha grid values must be below 1");
  }
}

bool is_atomic(const NestedCollection& f) {
  const auto& gens = f.generations();
  for (std::size_t g = 0; g + 1 < gens.size(); ++g) {
    for (const Cube& c : gens[g + 1]) {
      if (c.mass > 0.0 && distance(gens[g][c.parent].rep, c.rep) > AtomicMeasure::merge_tolerance) return false;
    }
  }
  return true;
}

bool same_measures(const NestedCollection& a, const NestedCollection& b) {
  if (a.depth() != b.depth()) return false;
  for (std::size_t g = 0; g < a.depth(); ++g) {
    const auto& x = a.generations()[g];
    const auto& y = b.generations()[g];
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].rep.curvature() != y[i].rep.curvature() || distance(x[i].rep, y[i].rep) > kRelTolerance ||
          std::abs(x[i].mass - y[i].mass) > kRelTolerance) {
        return false;
      }
    }
  }
  return true;
}

double dim_of(double alpha) { return 1.0 / (1.0 - alpha); }

}  // namespace

NestedCollection::NestedCollection(double sigma, double c1, double c2, std::vector<std::vector<Cube>> generations)
    : sigma_(sigma), c1_(c1), c2_(c2), generations_(std::move(generations)) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ValidationError("sigma must lie in (0, 1)");
  if (!(c1 > 0.0 && c1 <= c2)) throw ValidationError("diameter constants need 0 < C1 <= C2");
  for (std::size_t g = 0; g < generations_.size(); ++g) {
    const std::size_t n = g + 1;
    const double scale = std::pow(sigma, static_cast<double>(n));
    std::vector<double> child_mass(g == 0 ? 1 : generations_[g - 1].size(), 0.0);
    for (std::size_t i = 0; i < generations_[g].size(); ++i) {
      const Cube& c = generations_[g][i];
      const std::string where = "cube " + std::to_string(i) + " of generation " + std::to_string(n);
      if (c.id != i) throw ValidationError(where + " has a mismatched id");
      if (!(c.mass >= 0.0) || !std::isfinite(c.mass)) throw ValidationError(where + " has an invalid mass");
      if (c.diameter < c1 * scale * (1.0 - kRelTolerance) || c.diameter > c2 * scale * (1.0 + kRelTolerance)) {
        throw ValidationError(where + " violates the diameter envelope");
      }
      if (g == 0) {
        if (c.parent != Cube::kNoParent) throw ValidationError(where + " cannot have a parent");
        child_mass[0] += c.mass;
      } else {
        if (c.parent >= generations_[g - 1].size()) throw ValidationError(where + " has no valid parent");
        child_mass[c.parent] += c.mass;
      }
    }
    if (g == 0) continue;
    for (std::size_t p = 0; p < child_mass.size(); ++p) {
      const double parent_mass = generations_[g - 1][p].mass;
      bool has_child = false;
      for (const Cube& c : generations_[g]) has_child = has_child || c.parent == p;
      if (!has_child) {
        throw ValidationError("cube " + std::to_string(p) + " of generation " + std::to_string(n - 1) +
                              " has no children");
      }
      if (std::abs(child_mass[p] - parent_mass) > 1e-9 * std::max(1.0, parent_mass)) {
        throw ValidationError("children of cube " + std::to_string(p) + " of generation " + std::to_string(n - 1) +
                              " do not carry its mass");
      }
    }
  }
}

AtomicMeasure NestedCollection::measure_at(std::size_t n) const {
  if (n < 1 || n > generations_.size()) throw DomainError("generation out of range");
  std::vector<Atom> atoms;
  for (const Cube& c : generations_[n - 1]) {
    if (c.mass > 0.0) atoms.push_back({c.rep, c.mass});
  }
  return AtomicMeasure(std::move(atoms));
}

NestedCollection cantor_collection(std::size_t depth, double sigma) {
  if (!(sigma > 0.0 && sigma <= 0.5)) throw DomainError("Cantor ratio must lie in (0, 1/2]");
  if (depth > 22) throw LimitError("Cantor collection limited to 22 generations");
  struct Interval {
    double left;
    double length;
  };
  std::vector<Interval> current{{0.0, 1.0}};
  std::vector<std::vector<Cube>> gens;
  for (std::size_t n = 1; n <= depth; ++n) {
    std::vector<Interval> next;
    std::vector<Cube> cubes;
    const double mass = std::ldexp(1.0, -static_cast<int>(n));
    for (std::size_t p = 0; p < current.size(); ++p) {
      const double len = current[p].length * sigma;
      for (const double left : {current[p].left, current[p].left + current[p].length - len}) {
        const std::size_t id = cubes.size();
        cubes.push_back({id, n == 1 ? Cube::kNoParent : p, ModelPoint::plane(left + len / 2.0, 0.0), len, mass});
        next.push_back({left, len});
      }
    }
    gens.push_back(std::move(cubes));
    current = std::move(next);
  }
  return NestedCollection(sigma, 1.0, 1.0, std::move(gens));
}

NestedCollection dyadic_collection(std::size_t depth) { return cantor_collection(depth, 0.5); }

NestedCollection carpet_collection(std::size_t depth, double sigma) {
  if (!(sigma > 0.0 && sigma <= 1.0 / 3.0)) throw DomainError("carpet ratio must lie in (0, 1/3]");
  double cubes_total = 0.0;
  for (std::size_t n = 1; n <= depth; ++n) cubes_total += std::pow(8.0, static_cast<double>(n));
  if (cubes_total > static_cast<double>(kMaxCubes)) throw LimitError("carpet collection too deep");
  struct Square {
    double x;
    double y;
    double side;
  };
  std::vector<Square> current{{0.0, 0.0, 1.0}};
  std::vector<std::vector<Cube>> gens;
  for (std::size_t n = 1; n <= depth; ++n) {
    std::vector<Square> next;
    std::vector<Cube> cubes;
    const double mass = std::ldexp(1.0, -3 * static_cast<int>(n));
    for (std::size_t p = 0; p < current.size(); ++p) {
      const Square& s = current[p];
      const double side = s.side * sigma;
      const double offsets[3] = {0.0, (s.side - side) / 2.0, s.side - side};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i == 1 && j == 1) continue;
          const double x = s.x + offsets[i];
          const double y = s.y + offsets[j];
          const std::size_t id = cubes.size();
          cubes.push_back({id, n == 1 ? Cube::kNoParent : p, ModelPoint::plane(x + side / 2.0, y + side / 2.0),
                           side * std::numbers::sqrt2, mass});
          next.push_back({x, y, side});
        }
      }
    }
    gens.push_back(std::move(cubes));
    current = std::move(next);
  }
  return NestedCollection(sigma, std::numbers::sqrt2, std::numbers::sqrt2, std::move(gens));
}

NestedCollection chain_collection(std::size_t depth, double sigma) {
  std::vector<std::vector<Cube>> gens;
  for (std::size_t n = 1; n <= depth; ++n) {
    gens.push_back({Cube{0, n == 1 ? Cube::kNoParent : 0, ModelPoint::plane(0.0, 0.0),
                         std::pow(sigma, static_cast<double>(n)), 1.0}});
  }
  return NestedCollection(sigma, 1.0, 1.0, std::move(gens));
}

NestedCollection make_collection(const std::string& type, std::size_t depth, double sigma) {
  const bool custom = sigma > 0.0;
  if (type == "cantor") return cantor_collection(depth, custom ? sigma : 1.0 / 3.0);
  if (type == "dyadic") return custom ? cantor_collection(depth, sigma) : dyadic_collection(depth);
  if (type == "carpet") return carpet_collection(depth, custom ? sigma : 1.0 / 3.0);
  if (type == "chain") return chain_collection(depth, custom ? sigma : 0.5);
  throw DomainError("unknown collection type '" + type + "' (expected cantor, dyadic, carpet or chain)");
}

MinkowskiEstimate minkowski_dim(const NestedCollection& f) {
  const std::size_t depth = f.depth();
  if (depth < 3) throw DomainError("Minkowski estimate needs at least three generations");
  const double log_inv_sigma = -std::log(f.sigma());
  MinkowskiEstimate est;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, count = 0.0;
  for (std::size_t g = 0; g < depth; ++g) {
    const double x = static_cast<double>(g + 1) * log_inv_sigma;
    const double y = std::log(static_cast<double>(f.generations()[g].size()));
    est.ratios.push_back(y / x);
    if (g < depth / 2) continue;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count += 1.0;
  }
  est.dimension = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return est;
}

EvenlyConcentratedResult evenly_concentrated(const NestedCollection& f, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  EvenlyConcentratedResult result;
  for (std::size_t g = 0; g < f.depth(); ++g) {
    const auto& gen = f.generations()[g];
    std::vector<std::size_t> siblings(g == 0 ? 1 : f.generations()[g - 1].size(), 0);
    for (const Cube& c : gen) ++siblings[g == 0 ? 0 : c.parent];
    const double floor = lambda / static_cast<double>(gen.size()) * (1.0 - kRelTolerance);
    for (const Cube& c : gen) {
      if (siblings[g == 0 ? 0 : c.parent] > 1 && c.mass < floor) {
        result.ok = false;
        result.witness = std::make_pair(g + 1, c.id);
        return result;
      }
    }
  }
  return result;
}

AdmissibleSequence build_admissible_sequence(const NestedCollection& f, double alpha, std::size_t depth) {
  if (!(alpha < 1.0)) throw DomainError("alpha must be below 1");
  if (depth < 1 || depth > f.depth()) throw DomainError("depth out of range for the collection");
  AdmissibleSequence seq;
  const auto& gens = f.generations();
  for (std::size_t n = 1; n <= depth; ++n) seq.measures.push_back(f.measure_at(n));
  for (std::size_t g = 0; g + 1 < depth; ++g) {
    std::vector<ModelPoint> vertices;
    detail::PointLookup lookup(AtomicMeasure::merge_tolerance);
    auto vertex_of = [&](const ModelPoint& p) {
      const std::size_t found = lookup.find(p);
      if (found != detail::PointLookup::npos) return found;
      lookup.insert(p, vertices.size());
      vertices.push_back(p);
      return vertices.size() - 1;
    };
    std::vector<Edge> edges;
    double cost = 0.0;
    for (const Cube& child : gens[g + 1]) {
      if (child.mass <= 0.0) continue;
      const ModelPoint& from = gens[g][child.parent].rep;
      const std::size_t tail = vertex_of(from);
      const std::size_t head = vertex_of(child.rep);
      if (tail == head) continue;
      edges.push_back({tail, head, child.mass});
      cost += std::pow(child.mass, alpha) * distance(from, child.rep);
    }
    if (vertices.empty()) vertices.push_back(seq.measures[g][0].location);
    seq.step_paths.emplace_back(std::move(vertices), std::move(edges), seq.measures[g], seq.measures[g + 1]);
    seq.step_costs.push_back(cost);
  }
  return seq;
}

std::string to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::summable:
      return "summable";
    case SeriesClass::divergent:
      return "divergent";
    case SeriesClass::inconclusive:
      break;
  }
  return "inconclusive";
}

SeriesDiagnostics classify_series(double alpha, std::vector<double> step_costs, const DimensionOptions& options) {
  SeriesDiagnostics diag;
  diag.alpha = alpha;
  diag.step_costs = std::move(step_costs);
  const auto& c = diag.step_costs;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    diag.ratios.push_back(c[i] > 0.0 ? c[i + 1] / c[i]
                                     : (c[i + 1] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
  }
  if (diag.ratios.size() < 3 || options.window == 0) return diag;
  const std::size_t window = std::min(options.window, diag.ratios.size());
  const std::size_t first = diag.ratios.size() - window;
  if (std::all_of(c.begin() + static_cast<std::ptrdiff_t>(first), c.end(), [](double x) { return x == 0.0; })) {
    diag.verdict = SeriesClass::summable;
    return diag;
  }
  bool below = true;
  bool above = true;
  for (std::size_t i = first; i < diag.ratios.size(); ++i) {
    below = below && diag.ratios[i] < 1.0 - options.threshold;
    above = above && diag.ratios[i] > 1.0 + options.threshold;
  }
  if (below) diag.verdict = SeriesClass::summable;
  if (above) diag.verdict = SeriesClass::divergent;
  return diag;
}

namespace {

void fold_bracket(DimensionBracket& bracket, double alpha, SeriesClass verdict) {
  if (verdict == SeriesClass::summable) bracket.upper = std::min(bracket.upper, dim_of(alpha));
  if (verdict == SeriesClass::divergent) bracket.lower = std::max(bracket.lower, dim_of(alpha));
}

std::vector<SeriesDiagnostics> diagnose(const NestedCollection& f, const std::vector<double>& grid,
                                        const DimensionOptions& options) {
  const StepTerms terms = step_terms(f, f.depth());
  std::vector<SeriesDiagnostics> out(grid.size());
  parallel_for(grid.size(), thread_count(options.threads),
               [&](std::size_t i) { out[i] = classify_series(grid[i], costs_for(terms, grid[i]), options); });
  return out;
}

}  // namespace

DimensionBracket transport_dim_estimate(const NestedCollection& f, const std::vector<double>& alpha_grid,
                                        const DimensionOptions& options) {
  check_grid(alpha_grid);
  DimensionBracket bracket;
  bracket.per_alpha = diagnose(f, alpha_grid, options);
  for (const auto& d : bracket.per_alpha) fold_bracket(bracket, d.alpha, d.verdict);
  // Every step is free, so the series is summable for all alpha < 1.
  if (is_atomic(f)) bracket.upper = 0.0;
  return bracket;
}

DimensionBracket dimensional_distance_estimate(const NestedCollection& mu, const NestedCollection& nu,
                                               const std::vector<double>& alpha_grid, const DimensionOptions& options) {
  check_grid(alpha_grid);
  if (mu.depth() == 0 || nu.depth() == 0) throw DomainError("both collections need at least one generation");
  DimensionBracket bracket;
  if (same_measures(mu, nu) || (is_atomic(mu) && is_atomic(nu))) {
    bracket.upper = 0.0;
    return bracket;
  }
  auto all_inconclusive = [](const std::vector<SeriesDiagnostics>& ds) {
    return std::all_of(ds.begin(), ds.end(),
                       [](const SeriesDiagnostics& d) { return d.verdict == SeriesClass::inconclusive; });
  };
  if (is_atomic(mu) || is_atomic(nu)) {
    const DimensionBracket a = transport_dim_estimate(mu, alpha_grid, options);
    const DimensionBracket b = transport_dim_estimate(nu, alpha_grid, options);
    if (all_inconclusive(a.per_alpha) && all_inconclusive(b.per_alpha)) {
      throw DomainError("every alpha in the grid is inconclusive");
    }
    bracket.lower = std::max(a.lower, b.lower);
    bracket.upper = std::max(a.upper, b.upper);
    bracket.per_alpha = a.per_alpha;
    bracket.per_alpha.insert(bracket.per_alpha.end(), b.per_alpha.begin(), b.per_alpha.end());
    return bracket;
  }
  // Both nonatomic: alpha counts as summable only when both series are.
  const auto a = diagnose(mu, alpha_grid, options);
  const auto b = diagnose(nu, alpha_grid, options);
  bool informative = false;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    SeriesClass joint = SeriesClass::inconclusive;
    if (a[i].verdict == SeriesClass::summable && b[i].verdict == SeriesClass::summable) joint = SeriesClass::summable;
    if (a[i].verdict == SeriesClass::divergent || b[i].verdict == SeriesClass::divergent)
      joint = SeriesClass::divergent;
    informative = informative || joint != SeriesClass::inconclusive;
    fold_bracket(bracket, alpha_grid[i], joint);
  }
  if (!informative) throw DomainError("every alpha in the grid is inconclusive");
  bracket.per_alpha = a;
  bracket.per_alpha.insert(bracket.per_alpha.end(), b.begin(), b.end());
  return bracket;
}

}  // namespace ramified

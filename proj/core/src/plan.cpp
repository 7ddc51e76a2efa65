#include "ramified/plan.hpp"

#include "ramified/error.hpp"
#include "ramified/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <unordered_set>

namespace ramified {
namespace {

void check_margins(const TransportPlan& plan, const AtomicMeasure& a, const AtomicMeasure& b) {
  if (plan.row_margins().size() != a.size() || plan.col_margins().size() != b.size()) {
    throw ValidationError("plan dimensions do not match the measures");
  }
  const double tol = TransportPlan::margin_tolerance * std::max(1.0, a.total_mass());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(plan.row_margins()[i] - a[i].mass) > tol) {
      throw ValidationError("plan row " + std::to_string(i) + " does not match source atom mass");
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (std::abs(plan.col_margins()[j] - b[j].mass) > tol) {
      throw ValidationError("plan column " + std::to_string(j) + " does not match sink atom mass");
    }
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("plan functional needs alpha in [0, 1)");
}

// Extreme points of the transportation polytope by leaf peeling: in a plan
// supported on a forest some node is a leaf and ships its whole remaining
// margin along its single edge. Rows are nodes [0, m), columns [m, m + l).
// The remaining margins are a function of (active nodes, support so far),
// so that pair is a complete memo key.
class ForestEnumerator {
 public:
  ForestEnumerator(std::size_t m, std::size_t l, std::vector<double> margins, double tol, double alpha,
                   Eigen::MatrixXd dist)
      : m_(m), l_(l), margins_(std::move(margins)), tol_(tol), alpha_(alpha), dist_(std::move(dist)) {}

  struct Move {
    std::size_t leaf;
    std::size_t partner;
  };

  std::vector<Move> moves(const std::vector<double>& rem, std::uint32_t active) const {
    std::vector<Move> out;
    const std::size_t n = m_ + l_;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(active >> v & 1u)) continue;
      const bool row = v < m_;
      for (std::size_t u = row ? m_ : 0; u < (row ? n : m_); ++u) {
        if ((active >> u & 1u) && rem[u] >= rem[v] - tol_) out.push_back({v, u});
      }
    }
    return out;
  }

  std::uint64_t edge_bit(std::size_t v, std::size_t u) const {
    const std::size_t i = v < m_ ? v : u;
    const std::size_t j = (v < m_ ? u : v) - m_;
    return std::uint64_t{1} << (i * l_ + j);
  }

  void apply(std::vector<double>& rem, std::uint32_t& active, std::uint64_t& support, const Move& mv) const {
    rem[mv.partner] -= rem[mv.leaf];
    rem[mv.leaf] = 0.0;
    active &= ~(1u << mv.leaf);
    if (rem[mv.partner] <= tol_) active &= ~(1u << mv.partner);
    support |= edge_bit(mv.leaf, mv.partner);
  }

  /// Cost added by a move: the shipped mass^alpha times the distance.
  double move_cost(const std::vector<double>& rem, const Move& mv) const {
    const std::size_t i = mv.leaf < m_ ? mv.leaf : mv.partner;
    const std::size_t j = (mv.leaf < m_ ? mv.partner : mv.leaf) - m_;
    return rem[mv.leaf] > tol_
               ? std::pow(rem[mv.leaf], alpha_) * dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
               : 0.0;
  }

  /// Depth-first search below a partial plan. Branches whose partial cost
  /// already exceeds the shared incumbent by more than `slack` are cut; all
  /// terms are nonnegative, so no plan within slack of the optimum is lost.
  void explore(std::vector<double> rem, std::uint32_t active, std::uint64_t support, double partial,
               std::unordered_set<std::uint64_t>& seen, std::set<std::uint64_t>& found,
               std::atomic<double>& incumbent) const {
    const double bound = partial + remaining_bound(rem, active);
    if (bound > incumbent.load() + slack(incumbent.load())) return;
    if (active == 0) {
      found.insert(support);
      double cur = incumbent.load();
      while (partial < cur && !incumbent.compare_exchange_weak(cur, partial)) {
      }
      return;
    }
    const std::uint64_t key = support << (m_ + l_) | active;
    if (!seen.insert(key).second) return;
    std::vector<std::pair<double, Move>> ranked;
    for (const Move& mv : moves(rem, active)) ranked.emplace_back(move_cost(rem, mv), mv);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [added, mv] : ranked) {
      std::vector<double> next = rem;
      std::uint32_t next_active = active;
      std::uint64_t next_support = support;
      apply(next, next_active, next_support, mv);
      explore(std::move(next), next_active, next_support, partial + added, seen, found, incumbent);
    }
  }

  /// Lower bound on the cost still to pay: x -> x^alpha is subadditive, so an
  /// active node shipping r in any number of pieces pays at least r^alpha
  /// times its distance to the nearest active partner.
  double remaining_bound(const std::vector<double>& rem, std::uint32_t active) const {
    double rows = 0.0;
    double cols = 0.0;
    for (std::size_t v = 0; v < m_ + l_; ++v) {
      if (!(active >> v & 1u)) continue;
      const bool row = v < m_;
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t u = row ? m_ : 0; u < (row ? m_ + l_ : m_); ++u) {
        if (!(active >> u & 1u)) continue;
        const std::size_t i = row ? v : u;
        const std::size_t j = (row ? u : v) - m_;
        nearest = std::min(nearest, dist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
      if (!std::isfinite(nearest)) continue;
      (row ? rows : cols) += std::pow(rem[v], alpha_) * nearest;
    }
    return std::max(rows, cols);
  }

  /// Cost of the plan reached by always taking the cheapest move.
  double greedy_cost() const {
    std::vector<double> rem = margins_;
    std::uint32_t active = all_active();
    std::uint64_t support = 0;
    double cost = 0.0;
    while (active != 0) {
      const auto options = moves(rem, active);
      if (options.empty()) return std::numeric_limits<double>::infinity();
      const Move* pick = &options.front();
      double pick_cost = move_cost(rem, *pick);
      for (const Move& mv : options) {
        const double c = move_cost(rem, mv);
        if (c < pick_cost) {
          pick = &mv;
          pick_cost = c;
        }
      }
      cost += pick_cost;
      apply(rem, active, support, *pick);
    }
    return cost;
  }

  static double slack(double incumbent) { return 1e-9 * std::max(1.0, std::abs(incumbent)); }

  std::uint32_t all_active() const { return (1u << (m_ + l_)) - 1u; }
  const std::vector<double>& margins() const { return margins_; }

  /// Plan carried by a forest support, solved leaf by leaf in index order.
  Eigen::MatrixXd solve(std::uint64_t support) const {
    const std::size_t n = m_ + l_;
    std::vector<double> rem = margins_;
    std::vector<int> degree(n, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < l_; ++j) {
        if (support >> (i * l_ + j) & 1u) {
          ++degree[i];
          ++degree[m_ + j];
        }
      }
    }
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(l_));
    for (;;) {
      std::size_t v = 0;
      while (v < n && degree[v] != 1) ++v;
      if (v == n) break;
      const bool row = v < m_;
      std::size_t u = row ? m_ : 0;
      for (; u < (row ? n : m_); ++u) {
        if (degree[u] > 0 && (support & edge_bit(v, u))) break;
      }
      const std::size_t i = row ? v : u;
      const std::size_t j = (row ? u : v) - m_;
      const double g = rem[v] > tol_ ? rem[v] : 0.0;
      gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g;
      rem[u] -= rem[v];
      rem[v] = 0.0;
      support &= ~edge_bit(v, u);
      --degree[v];
      --degree[u];
    }
    return gamma;
  }

 private:
  std::size_t m_;
  std::size_t l_;
  std::vector<double> margins_;
  double tol_;
  double alpha_;
  Eigen::MatrixXd dist_;
};

}  // namespace

TransportPlan::TransportPlan(Eigen::MatrixXd gamma, std::vector<double> row_margins, std::vector<double> col_margins)
    : gamma_(std::move(gamma)), rows_(std::move(row_margins)), cols_(std::move(col_margins)) {
  if (static_cast<std::size_t>(gamma_.rows()) != rows_.size() ||
      static_cast<std::size_t>(gamma_.cols()) != cols_.size()) {
    throw ValidationError("plan matrix shape does not match its margins");
  }
  if (!gamma_.allFinite() || (gamma_.size() > 0 && gamma_.minCoeff() < 0.0)) {
    throw ValidationError("plan entries must be finite and nonnegative");
  }
  double total = 0.0;
  for (double r : rows_) total += r;
  const double tol = margin_tolerance * std::max(1.0, total);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (std::abs(gamma_.row(static_cast<Eigen::Index>(i)).sum() - rows_[i]) > tol) {
      throw ValidationError("plan row " + std::to_string(i) + " violates its margin");
    }
  }
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (std::abs(gamma_.col(static_cast<Eigen::Index>(j)).sum() - cols_[j]) > tol) {
      throw ValidationError("plan column " + std::to_string(j) + " violates its margin");
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> TransportPlan::support() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (Eigen::Index i = 0; i < gamma_.rows(); ++i) {
    for (Eigen::Index j = 0; j < gamma_.cols(); ++j) {
      if (gamma_(i, j) > 0.0) out.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return out;
}

double h_alpha(const TransportPlan& gamma, const AtomicMeasure& a, const AtomicMeasure& b, double alpha) {
  check_alpha(alpha);
  check_margins(gamma, a, b);
  double value = 0.0;
  for (const auto& [i, j] : gamma.support()) {
    const double g = gamma.gamma()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    value += std::pow(g, alpha) * distance(a[i].location, b[j].location);
  }
  return value;
}

JAlphaResult j_alpha(const AtomicMeasure& a, const AtomicMeasure& b, double alpha, const JAlphaOptions& options) {
  check_alpha(alpha);
  if (a.empty() || b.empty()) throw ValidationError("plan measures must be nonempty");
  if (a.curvature() != b.curvature()) throw ValidationError("measures carry different curvature tags");
  const double ta = a.total_mass();
  const double tb = b.total_mass();
  if (std::abs(ta - tb) > 1e-9 * std::max(ta, tb)) {
    throw ValidationError("total masses differ: " + std::to_string(ta) + " vs " + std::to_string(tb));
  }
  const std::size_t m = a.size();
  const std::size_t l = b.size();
  if (m + l > options.limit || m + l > 16 || m * l > 48) {
    throw LimitError("plan enumeration limited to m + l <= " + std::to_string(options.limit) + ", got " +
                     std::to_string(m + l));
  }

  std::vector<double> margins;
  for (const Atom& x : a.atoms()) margins.push_back(x.mass);
  for (const Atom& y : b.atoms()) margins.push_back(y.mass);
  Eigen::MatrixXd dist(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = distance(a[i].location, b[j].location);
    }
  }
  const ForestEnumerator forests(m, l, margins, 1e-12 * ta, alpha, dist);

  std::atomic<double> incumbent{forests.greedy_cost()};
  const std::vector<double> start = forests.margins();
  const auto first = forests.moves(start, forests.all_active());
  std::vector<std::set<std::uint64_t>> found(first.size());
  parallel_for(first.size(), thread_count(options.threads), [&](std::size_t t) {
    std::vector<double> rem = start;
    std::uint32_t active = forests.all_active();
    std::uint64_t support = 0;
    const double added = forests.move_cost(rem, first[t]);
    forests.apply(rem, active, support, first[t]);
    std::unordered_set<std::uint64_t> seen;
    forests.explore(std::move(rem), active, support, added, seen, found[t], incumbent);
  });
  std::set<std::uint64_t> supports;
  for (const auto& s : found) supports.insert(s.begin(), s.end());

  JAlphaResult best;
  best.extreme_points = supports.size();
  bool have = false;
  std::vector<std::pair<std::size_t, std::size_t>> best_support;
  Eigen::MatrixXd best_gamma;
  for (std::uint64_t s : supports) {
    const Eigen::MatrixXd gamma = forests.solve(s);
    double value = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> positive;
    for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
      for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
        if (gamma(i, j) > 0.0) {
          value += std::pow(gamma(i, j), alpha) * dist(i, j);
          positive.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
      }
    }
    const double tie = 1e-12 * std::max(1.0, std::abs(best.value));
    if (!have || value < best.value - tie || (value <= best.value + tie && positive < best_support)) {
      have = true;
      best.value = value;
      best_support = std::move(positive);
      best_gamma = gamma;
    }
  }
  std::vector<double> rows(margins.begin(), margins.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<double> cols(margins.begin() + static_cast<std::ptrdiff_t>(m), margins.end());
  best.plan = TransportPlan(std::move(best_gamma), std::move(rows), std::move(cols));
  return best;
}

}  // namespace ramified

#include "app.hpp"

#include "problem.hpp"
#include "report.hpp"

#include "ramified/error.hpp"
#include "ramified/parallel.hpp"
#include "ramified/plan.hpp"
#include "ramified/solver.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace ramified::cli {
namespace {

struct Flags {
  std::string spec;
  std::string out;
  std::string svg;
  std::optional<double> alpha;
  std::optional<double> curvature;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> limit;
  bool cross_check = false;
  std::string axis = "alpha";
  std::string grid;
  std::string collection;
  std::size_t depth = 12;
  double sigma = 0.0;
  double lambda = 1.0;
  std::size_t window = DimensionOptions{}.window;
  double threshold = DimensionOptions{}.threshold;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

ProblemSpec load_with_overrides(const Flags& flags, bool limit_is_plan) {
  ProblemSpec spec = load_problem(flags.spec);
  if (flags.alpha) spec.alpha = *flags.alpha;
  if (flags.curvature) spec.curvature = *flags.curvature;
  if (flags.seed) spec.solver.seed = *flags.seed;
  if (flags.limit) (limit_is_plan ? spec.plan_limit : spec.solver.topology_limit) = *flags.limit;
  return spec;
}

SolveResult solve_spec(const ProblemSpec& spec, std::size_t threads = 0) {
  const Instance inst = build_instance(spec);
  SolverOptions options = spec.solver;
  options.threads = threads;
  return solve(inst.sources, inst.sinks, spec.alpha, Curvature(spec.curvature), options);
}

void cmd_solve(const Flags& flags) {
  const ProblemSpec spec = load_with_overrides(flags, false);
  const SolveResult result = solve_spec(spec);
  write_output(flags.out, solve_report(spec, result).dump(2) + "\n");
  if (!flags.svg.empty()) write_output(flags.svg, render_svg(result.best));
}

void cmd_plan(const Flags& flags) {
  const ProblemSpec spec = load_with_overrides(flags, true);
  const Instance inst = build_instance(spec);
  JAlphaOptions options;
  options.limit = spec.plan_limit;
  const JAlphaResult plan = j_alpha(inst.sources, inst.sinks, spec.alpha, options);
  std::optional<SolveResult> solved;
  if (flags.cross_check) solved = solve_spec(spec);
  write_output(flags.out, plan_report(spec, plan, solved ? &*solved : nullptr).dump(2) + "\n");
}

void cmd_sweep(const Flags& flags) {
  const ProblemSpec base = load_with_overrides(flags, false);
  const std::vector<double> grid = parse_grid(flags.grid);
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), thread_count(), [&](std::size_t i) {
    ProblemSpec spec = base;
    (flags.axis == "alpha" ? spec.alpha : spec.curvature) = grid[i];
    rows[i] = sweep_row(i, spec, solve_spec(spec, 1));
  });
  write_output(flags.out, sweep_csv(rows));
}

void cmd_dimension(const Flags& flags) {
  DimensionRequest request;
  request.collection = flags.collection;
  request.depth = flags.depth;
  request.sigma = flags.sigma;
  request.lambda = flags.lambda;
  request.alpha_grid = parse_grid(flags.grid.empty() ? "-1:0:21" : flags.grid);
  request.options.window = flags.window;
  request.options.threshold = flags.threshold;
  write_output(flags.out, dimension_report(request).dump(2) + "\n");
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw ParseError("grid must look like lo:hi:steps, got '" + text + "'");
  }
  double lo = 0.0;
  double hi = 0.0;
  long long steps = 0;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, first);
    const std::string b = text.substr(first + 1, second - first - 1);
    const std::string c = text.substr(second + 1);
    lo = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    hi = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    steps = std::stoll(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::logic_error&) {
    throw ParseError("grid must look like lo:hi:steps, got '" + text + "'");
  }
  if (steps < 0 || steps > 100000 || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ParseError("grid needs finite bounds and 0 <= steps <= 100000");
  }
  std::vector<double> out;
  for (long long i = 0; i < steps; ++i) {
    out.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return out;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Ramified optimal transport on the model surfaces M_k^2"};
  app.require_subcommand(1);
  Flags flags;

  auto add_problem_flags = [&](CLI::App* sub) {
    sub->add_option("--spec", flags.spec, "Problem spec (JSON)")->required();
    sub->add_option("--out", flags.out, "Output file (default stdout)");
    sub->add_option("--alpha", flags.alpha, "Override the cost exponent");
    sub->add_option("--curvature", flags.curvature, "Override the curvature k");
    sub->add_option("--seed", flags.seed, "Override the restart seed");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve for an alpha-optimal transport path");
  add_problem_flags(solve_cmd);
  solve_cmd->add_option("--svg", flags.svg, "Also render the path as SVG");
  solve_cmd->add_option("--limit", flags.limit, "Largest m + l searched");

  CLI::App* plan_cmd = app.add_subcommand("plan", "Exact J_alpha over transport plans");
  add_problem_flags(plan_cmd);
  plan_cmd->add_option("--limit", flags.limit, "Largest m + l enumerated");
  plan_cmd->add_flag("--cross-check", flags.cross_check, "Also solve and check d_alpha <= J_alpha");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve along a grid of alpha or k values (CSV)");
  add_problem_flags(sweep_cmd);
  sweep_cmd->add_option("--limit", flags.limit, "Largest m + l searched");
  sweep_cmd->add_option("--axis", flags.axis, "Swept parameter")->check(CLI::IsMember({"alpha", "k"}));
  sweep_cmd->add_option("--grid", flags.grid, "lo:hi:steps")->required();

  CLI::App* dim_cmd = app.add_subcommand("dimension", "Transport dimension of a nested collection");
  dim_cmd->add_option("collection,--collection", flags.collection, "cantor, dyadic, carpet or chain")
      ->required()
      ->check(CLI::IsMember({"cantor", "dyadic", "carpet", "chain"}));
  dim_cmd->add_option("--depth", flags.depth, "Generations")->check(CLI::Range(1, 64));
  dim_cmd->add_option("--grid", flags.grid, "Alpha grid lo:hi:steps (default -1:0:21)");
  dim_cmd->add_option("--sigma", flags.sigma, "Override the contraction ratio");
  dim_cmd->add_option("--lambda", flags.lambda, "Evenly-concentrated constant")->check(CLI::PositiveNumber);
  dim_cmd->add_option("--window", flags.window, "Trailing ratios inspected");
  dim_cmd->add_option("--threshold", flags.threshold, "Ratio-test margin around 1");
  dim_cmd->add_option("--out", flags.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve_cmd) cmd_solve(flags);
    if (*plan_cmd) cmd_plan(flags);
    if (*sweep_cmd) cmd_sweep(flags);
    if (*dim_cmd) cmd_dimension(flags);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const LimitError& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ramified::cli

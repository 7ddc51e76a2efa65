#include "app.hpp"
#include "problem.hpp"
#include "report.hpp"

#include "ramified/error.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ramified::cli {
namespace {

namespace fs = std::filesystem;

std::string data_file(const std::string& name) {
  const char* dir = std::getenv("RAMIFIED_TEST_DATA");
  return (fs::path(dir ? dir : "tests/data") / name).string();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ramified_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "ramified");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

TEST(ParseProblem, ReadsAllFields) {
  const ProblemSpec spec = parse_problem(nlohmann::json::parse(R"({
    "alpha": 0.25, "curvature": -1,
    "sources": [{"r": 0.5, "phi": 0.0, "mass": 1}],
    "sinks": [{"coords": [0, 0, 1], "mass": 1}],
    "solver": {"topology_limit": 5, "plan_limit": 9, "max_sweeps": 20, "restarts": 1, "seed": 42}
  })"));
  EXPECT_EQ(spec.alpha, 0.25);
  EXPECT_EQ(spec.curvature, -1.0);
  EXPECT_EQ(spec.solver.topology_limit, 5u);
  EXPECT_EQ(spec.plan_limit, 9u);
  EXPECT_EQ(spec.solver.max_sweeps, 20);
  EXPECT_EQ(spec.solver.restarts, 1);
  EXPECT_EQ(spec.solver.seed, 42u);
  const Instance inst = build_instance(spec);
  EXPECT_NEAR(distance(inst.sources[0].location, inst.sinks[0].location), 0.5, 1e-14);
}

TEST(ParseProblem, PlaneCoordinatesBecomePolarOnCurvedSurfaces) {
  ProblemSpec spec = parse_problem(nlohmann::json::parse(
      R"({"alpha": 0.5, "sources": [{"x": 0.6, "y": 0.8, "mass": 1}], "sinks": [{"x": 0, "y": 0, "mass": 1}]})"));
  for (double k : {0.0, 0.5, -1.0}) {
    spec.curvature = k;
    const Instance inst = build_instance(spec);
    EXPECT_NEAR(distance(inst.sources[0].location, inst.sinks[0].location), 1.0, 1e-12);
  }
}

TEST(ParseProblem, Errors) {
  EXPECT_THROW(parse_problem(nlohmann::json::parse("[]")), ParseError);
  EXPECT_THROW(parse_problem(nlohmann::json::parse(R"({"sources": [], "sinks": []})")), ParseError);
  EXPECT_THROW(parse_problem(nlohmann::json::parse(R"({"alpha": "x", "sources": [], "sinks": []})")), ParseError);
  EXPECT_THROW(parse_problem(nlohmann::json::parse(R"({"alpha": 0.5, "sources": [1], "sinks": []})")), ParseError);
  const ProblemSpec negative = parse_problem(nlohmann::json::parse(
      R"({"alpha": 0.5, "sources": [{"x": 0, "y": 0, "mass": 1}, {"x": 1, "y": 0, "mass": -1}],
          "sinks": [{"x": 0, "y": 1, "mass": 1}]})"));
  try {
    build_instance(negative);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sources[1]"), std::string::npos) << e.what();
  }
  ProblemSpec mismatch = negative;
  mismatch.sources = nlohmann::json::parse(R"([{"x": 0, "y": 0, "mass": 2}])");
  EXPECT_THROW(build_instance(mismatch), ValidationError);
}

TEST(ParseGrid, Forms) {
  EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_grid("2:5:1"), (std::vector<double>{2.0}));
  EXPECT_TRUE(parse_grid("0:1:0").empty());
  EXPECT_THROW(parse_grid("0:1"), ParseError);
  EXPECT_THROW(parse_grid("a:1:2"), ParseError);
  EXPECT_THROW(parse_grid("0:1:-2"), ParseError);
}

TEST(SweepCsv, HeaderQuotingAndPrecision) {
  SweepRow row;
  row.alpha = 0.1;
  row.min_angle = std::numeric_limits<double>::quiet_NaN();
  const std::string csv = sweep_csv({row});
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")),
            "index,alpha,curvature,cost,lower_bound,min_angle,max_degree,min_separation_ratio,angle_ok,separation_ok,"
            "bound_ok,converged");
  EXPECT_NE(csv.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(csv.find(",,0,"), std::string::npos);
  EXPECT_EQ(format_real(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(sweep_csv({}).find("\r\n") + 2, sweep_csv({}).size());
}

TEST(Commands, SolveRoundTripsThroughValidation) {
  const fs::path out = scratch("solve.json");
  const fs::path svg = scratch("solve.svg");
  ASSERT_EQ(run_args({"solve", "--spec", data_file("y_instance.json"), "--out", out.string(), "--svg", svg.string()}),
            0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  EXPECT_NEAR(doc["cost"].get<double>(), 3.0, 1e-12);
  EXPECT_TRUE(doc["angle_audit"]["ok"].get<bool>());
  EXPECT_NEAR(doc["angle_audit"]["min_angle"].get<double>(), std::acos(0.0), 1e-6);
  const TransportPath g = path_from_json(doc);
  EXPECT_TRUE(validate(g).ok());
  EXPECT_NEAR(cost_alpha(g, 0.5), doc["cost"].get<double>(), 1e-14);
  const std::string picture = slurp(svg);
  EXPECT_EQ(picture.rfind("<?xml", 0), 0u);
  EXPECT_NE(picture.find("</svg>"), std::string::npos);
}

TEST(Commands, SolveAtLinearCostHasNoBranch) {
  const fs::path out = scratch("solve_linear.json");
  ASSERT_EQ(run_args({"solve", "--spec", data_file("y_instance.json"), "--alpha", "1", "--out", out.string()}), 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  EXPECT_NEAR(doc["cost"].get<double>(), std::sqrt(5.0), 1e-9);
  EXPECT_TRUE(doc["angle_audit"]["records"].empty());
}

TEST(Commands, CurvedSvgProjections) {
  for (const char* k : {"0.5", "-1"}) {
    const fs::path svg = scratch(std::string("curved") + k + ".svg");
    ASSERT_EQ(run_args({"solve", "--spec", data_file("y_instance.json"), "--curvature", k, "--out",
                        scratch("curved.json").string(), "--svg", svg.string()}),
              0);
    EXPECT_NE(slurp(svg).find("<circle cx=\"256.000\" cy=\"256.000\""), std::string::npos);
  }
}

TEST(Commands, PlanMatchesGridOracleAndCrossChecks) {
  const fs::path out = scratch("plan.json");
  ASSERT_EQ(run_args({"plan", "--spec", data_file("plan_2x2.json"), "--cross-check", "--out", out.string()}), 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  // Sources (0,0), (0,1) with 0.3, 0.7; sinks (2,0), (2,1) with 0.6, 0.4.
  // gamma_11 = t in [0.2, 0.3]; the minimum of the concave H sits at an end.
  auto h = [](double t) {
    const double d = 2.0, e = std::sqrt(5.0);
    auto w = [](double g) { return g > 0 ? std::sqrt(g) : 0.0; };
    return w(t) * d + w(0.3 - t) * e + w(0.6 - t) * e + w(t + 0.1) * d;
  };
  double best = 1e9;
  for (int i = 0; i <= 1000; ++i) best = std::min(best, h(0.2 + 0.1 * i / 1000.0));
  EXPECT_NEAR(doc["j_alpha"].get<double>(), best, 1e-9);
  EXPECT_TRUE(doc["cross_check"]["ok"].get<bool>());
}

TEST(Commands, PlanDiracToDirac) {
  const fs::path out = scratch("plan_dirac.json");
  ASSERT_EQ(run_args({"plan", "--spec", data_file("dirac.json"), "--out", out.string()}), 0);
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(slurp(out))["j_alpha"].get<double>(), 5.0);
}

TEST(Commands, ExitCodes) {
  const fs::path out = scratch("err.json");
  EXPECT_EQ(run_args({"solve", "--spec", data_file("negative_mass.json"), "--out", out.string()}), 2);
  EXPECT_EQ(run_args({"plan", "--spec", data_file("mass_mismatch.json"), "--out", out.string()}), 2);
  EXPECT_EQ(run_args({"solve", "--spec", data_file("malformed.json"), "--out", out.string()}), 1);
  EXPECT_EQ(run_args({"solve", "--spec", data_file("does_not_exist.json")}), 1);
  EXPECT_EQ(run_args({"solve", "--spec", data_file("y_instance.json"), "--limit", "2", "--out", out.string()}), 3);
  EXPECT_EQ(run_args({"dimension", "sponge"}), 1);
  EXPECT_EQ(run_args({"sweep", "--spec", data_file("y_instance.json"), "--grid", "bad"}), 1);
  EXPECT_EQ(run_args({"frobnicate"}), 1);
}

TEST(Commands, SweepAlphaAnglesAndEmptyRange) {
  const fs::path out = scratch("sweep.csv");
  ASSERT_EQ(run_args({"sweep", "--spec", data_file("y_instance.json"), "--grid", "0.55:0.9:8", "--out", out.string()}),
            0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line.substr(0, line.find('\r')));
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    const double alpha = std::stod(f[1]);
    // The branch sits at height s / sqrt(1 - s^2), s = 2^(alpha - 1), above
    // the sink; past the sink the two source edges go straight there.
    const double s = std::pow(2.0, alpha - 1.0);
    if (s / std::sqrt(1.0 - s * s) < 2.0) {
      EXPECT_NEAR(std::stod(f[5]), std::acos(std::pow(2.0, 2.0 * alpha - 1.0) - 1.0), 1e-4);
    } else {
      EXPECT_EQ(f[5], "");
      EXPECT_EQ(f[6], "2");
    }
    ++rows;
  }
  EXPECT_EQ(rows, 8);
  ASSERT_EQ(run_args({"sweep", "--spec", data_file("y_instance.json"), "--grid", "0:1:0", "--out", out.string()}), 0);
  const std::string header_only = slurp(out);
  EXPECT_EQ(std::count(header_only.begin(), header_only.end(), '\n'), 1);
}

TEST(Commands, SweepCurvatureSeparationGrowsAsCurvatureDrops) {
  const fs::path out = scratch("sweep_k.csv");
  ASSERT_EQ(run_args({"sweep", "--spec", data_file("y_instance.json"), "--axis", "k", "--grid", "-2:0.5:6", "--out",
                      out.string()}),
            0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  double previous = 0.0;
  bool first = true;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line.substr(0, line.find('\r')));
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    const double ratio = std::stod(f[7]);
    if (!first) EXPECT_LT(ratio, previous);
    previous = ratio;
    first = false;
  }
}

TEST(Commands, DimensionReports) {
  const fs::path out = scratch("dim.json");
  ASSERT_EQ(run_args({"dimension", "cantor", "--depth", "12", "--out", out.string()}), 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(out));
  const double lower = doc["transport_dimension"]["lower"].get<double>();
  const double upper = doc["transport_dimension"]["upper"].get<double>();
  EXPECT_LE(lower, std::log(2.0) / std::log(3.0));
  EXPECT_GE(upper, std::log(2.0) / std::log(3.0));
  EXPECT_TRUE(doc["evenly_concentrated"]["ok"].get<bool>());

  ASSERT_EQ(run_args({"dimension", "--collection", "dyadic", "--grid", "-0.5:0.5:21", "--out", out.string()}), 0);
  const nlohmann::json dyadic = nlohmann::json::parse(slurp(out));
  EXPECT_LE(dyadic["transport_dimension"]["lower"].get<double>(), 1.0);
  EXPECT_GE(dyadic["transport_dimension"]["upper"].get<double>(), 1.0);

  ASSERT_EQ(run_args({"dimension", "cantor", "--depth", "2", "--out", out.string()}), 0);
  const nlohmann::json shallow = nlohmann::json::parse(slurp(out));
  EXPECT_TRUE(shallow["transport_dimension"]["has_inconclusive"].get<bool>());
  EXPECT_EQ(shallow["per_alpha"][0]["verdict"], "inconclusive");
}

}  // namespace
}  // namespace ramified::cli

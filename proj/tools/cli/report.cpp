#include "report.hpp"

#include "ramified/audit.hpp"
#include "ramified/bounds.hpp"
#include "ramified/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ramified::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

OrderedJson atoms_json(const AtomicMeasure& m) {
  OrderedJson out = OrderedJson::array();
  for (const Atom& a : m.atoms()) {
    OrderedJson atom = point_json(a.location);
    atom["mass"] = a.mass;
    out.push_back(std::move(atom));
  }
  return out;
}

ModelPoint point_from_json(Curvature k, const nlohmann::json& p) {
  const auto& c = p.at("coords");
  return ModelPoint::from_embedding(k, {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()});
}

AtomicMeasure atoms_from_json(Curvature k, const nlohmann::json& atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms) out.push_back({point_from_json(k, a), a.at("mass").get<double>()});
  return AtomicMeasure(std::move(out));
}

std::string csv_real(double x) { return std::isfinite(x) ? format_real(x) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

OrderedJson point_json(const ModelPoint& p) {
  const auto& c = p.coords();
  const auto [r, phi] = p.polar();
  OrderedJson out;
  out["coords"] = {c.x(), c.y(), c.z()};
  out["polar"] = {r, phi};
  return out;
}

OrderedJson path_json(const TransportPath& g) {
  OrderedJson out;
  out["curvature"] = g.curvature().value();
  OrderedJson vertices = OrderedJson::array();
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    OrderedJson vertex;
    vertex["id"] = v;
    vertex.update(point_json(g.vertices()[v]));
    vertices.push_back(std::move(vertex));
  }
  out["vertices"] = std::move(vertices);
  OrderedJson edges = OrderedJson::array();
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const Edge& edge = g.edges()[e];
    edges.push_back({{"tail", edge.tail}, {"head", edge.head}, {"weight", edge.weight}, {"length", g.edge_length(e)}});
  }
  out["edges"] = std::move(edges);
  out["sources"] = atoms_json(g.source());
  out["sinks"] = atoms_json(g.sink());
  return out;
}

TransportPath path_from_json(const nlohmann::json& doc) {
  try {
    const auto& p = doc.at("path");
    const Curvature k(p.at("curvature").get<double>());
    std::vector<ModelPoint> vertices;
    for (const auto& v : p.at("vertices")) vertices.push_back(point_from_json(k, v));
    std::vector<Edge> edges;
    for (const auto& e : p.at("edges")) {
      edges.push_back({e.at("tail").get<std::size_t>(), e.at("head").get<std::size_t>(), e.at("weight").get<double>()});
    }
    return TransportPath(std::move(vertices), std::move(edges), atoms_from_json(k, p.at("sources")),
                         atoms_from_json(k, p.at("sinks")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("result file: ") + e.what());
  }
}

OrderedJson solve_report(const ProblemSpec& spec, const SolveResult& result) {
  const double alpha = spec.alpha;
  const TransportPath& g = result.best;
  OrderedJson out;
  out["command"] = "solve";
  out["alpha"] = alpha;
  out["curvature"] = spec.curvature;
  out["seed"] = spec.solver.seed;
  out["cost"] = result.cost;
  out["lower_bound"] = result.lower_bound;
  out["lower_bound_ok"] = result.lower_bound <= result.cost;
  out["topologies_searched"] = result.topologies_searched;
  out["converged"] = result.converged;
  out["path"] = path_json(g);
  const ValidationReport report = validate(g);
  out["validation"] = {{"ok", report.ok()}, {"summary", report.summary()}};

  OrderedJson angles;
  bool angles_ok = true;
  bool separation_ok = true;
  double min_angle = kNaN;
  OrderedJson records = OrderedJson::array();
  for (const AngleRecord& r : result.angle_report) {
    angles_ok = angles_ok && r.angle_ok;
    separation_ok = separation_ok && r.separation_ok;
    min_angle = std::isnan(min_angle) ? r.angle : std::min(min_angle, r.angle);
    records.push_back({{"vertex", r.vertex},
                       {"edges", {r.edge1, r.edge2}},
                       {"incoming", r.incoming},
                       {"probe_radius", r.probe_radius},
                       {"separation", r.separation},
                       {"angle", r.angle},
                       {"pair_bound", r.pair_bound},
                       {"separation_lhs", r.separation_lhs},
                       {"separation_rhs", r.separation_rhs},
                       {"angle_ok", r.angle_ok},
                       {"separation_ok", r.separation_ok}});
  }
  angles["ok"] = angles_ok && separation_ok;
  angles["min_angle"] = min_angle;
  if (alpha < 1.0) angles["theta_alpha"] = theta_alpha(alpha);
  angles["records"] = std::move(records);
  out["angle_audit"] = std::move(angles);

  if (alpha < 0.0) {
    OrderedJson mass;
    bool ok = true;
    OrderedJson rows = OrderedJson::array();
    for (const MassRecord& r : mass_audit(g, alpha)) {
      ok = ok && r.ok;
      rows.push_back({{"vertex", r.vertex}, {"edges", {r.edge1, r.edge2}}, {"fraction", r.fraction}, {"ok", r.ok}});
    }
    mass["ok"] = ok;
    mass["bound"] = k_i_lower_bound(alpha);
    mass["records"] = std::move(rows);
    out["mass_audit"] = std::move(mass);
  }

  const DegreeAudit d = degree_audit(g, alpha);
  out["degree_audit"] = {{"max_degree", d.max_degree},
                         {"vertex", d.vertex},
                         {"doubling_constant", d.doubling_constant},
                         {"probe_radius", d.probe_radius},
                         {"x", d.x},
                         {"bound_at_radius", d.bound_at_radius},
                         {"bound_at_zero", d.bound_at_zero},
                         {"ok_at_radius", d.ok_at_radius},
                         {"ok_at_zero", d.ok_at_zero}};

  if (alpha <= 0.0) {
    const double est = negative_estimate(g.source(), g.sink(), alpha);
    out["negative_estimate"] = {{"value", est}, {"ok", est <= result.cost * (1.0 + 1e-12)}};
  }
  return out;
}

OrderedJson plan_report(const ProblemSpec& spec, const JAlphaResult& plan, const SolveResult* solved) {
  OrderedJson out;
  out["command"] = "plan";
  out["alpha"] = spec.alpha;
  out["curvature"] = spec.curvature;
  out["j_alpha"] = plan.value;
  OrderedJson matrix = OrderedJson::array();
  const auto& gamma = plan.plan.gamma();
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (Eigen::Index j = 0; j < gamma.cols(); ++j) row.push_back(gamma(i, j));
    matrix.push_back(std::move(row));
  }
  out["plan"] = std::move(matrix);
  OrderedJson support = OrderedJson::array();
  for (const auto& [i, j] : plan.plan.support()) support.push_back({i, j});
  out["support"] = std::move(support);
  out["row_margins"] = plan.plan.row_margins();
  out["col_margins"] = plan.plan.col_margins();
  if (solved != nullptr) {
    out["cross_check"] = {{"solve_cost", solved->cost},
                          {"lower_bound", solved->lower_bound},
                          {"ok", solved->cost <= plan.value * (1.0 + 1e-9) + 1e-12}};
  }
  return out;
}

SweepRow sweep_row(std::size_t index, const ProblemSpec& spec, const SolveResult& result) {
  SweepRow row;
  row.index = index;
  row.alpha = spec.alpha;
  row.curvature = spec.curvature;
  row.cost = result.cost;
  row.lower_bound = result.lower_bound;
  row.min_angle = kNaN;
  row.min_separation_ratio = kNaN;
  for (const AngleRecord& r : result.angle_report) {
    row.min_angle = std::isnan(row.min_angle) ? r.angle : std::min(row.min_angle, r.angle);
    const double ratio = r.separation / (2.0 * r.probe_radius);
    row.min_separation_ratio = std::isnan(row.min_separation_ratio) ? ratio : std::min(row.min_separation_ratio, ratio);
    row.angle_ok = row.angle_ok && r.angle_ok;
    row.separation_ok = row.separation_ok && r.separation_ok;
  }
  row.max_degree = degree_audit(result.best, spec.alpha).max_degree;
  row.bound_ok = result.lower_bound <= result.cost;
  row.converged = result.converged;
  return row;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  static const char* header[] = {"index",       "alpha",         "curvature",  "cost",
                                 "lower_bound", "min_angle",     "max_degree", "min_separation_ratio",
                                 "angle_ok",    "separation_ok", "bound_ok",   "converged"};
  std::string out;
  for (std::size_t i = 0; i < std::size(header); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += "\r\n";
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  for (const SweepRow& r : rows) {
    const std::string fields[] = {std::to_string(r.index),
                                  csv_real(r.alpha),
                                  csv_real(r.curvature),
                                  csv_real(r.cost),
                                  csv_real(r.lower_bound),
                                  csv_real(r.min_angle),
                                  std::to_string(r.max_degree),
                                  csv_real(r.min_separation_ratio),
                                  flag(r.angle_ok),
                                  flag(r.separation_ok),
                                  flag(r.bound_ok),
                                  flag(r.converged)};
    for (std::size_t i = 0; i < std::size(fields); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    out += "\r\n";
  }
  return out;
}

OrderedJson dimension_report(const DimensionRequest& request) {
  const NestedCollection f = make_collection(request.collection, request.depth, request.sigma);
  OrderedJson out;
  out["command"] = "dimension";
  out["collection"] = request.collection;
  out["depth"] = f.depth();
  out["sigma"] = f.sigma();
  if (f.depth() >= 3) {
    const MinkowskiEstimate m = minkowski_dim(f);
    out["minkowski"] = {{"dimension", m.dimension}, {"ratios", m.ratios}};
  } else {
    out["minkowski"] = nullptr;
  }
  const EvenlyConcentratedResult ec = evenly_concentrated(f, request.lambda);
  OrderedJson witness = nullptr;
  if (ec.witness) witness = {ec.witness->first, ec.witness->second};
  out["evenly_concentrated"] = {{"lambda", request.lambda}, {"ok", ec.ok}, {"witness", witness}};

  const DimensionBracket b = transport_dim_estimate(f, request.alpha_grid, request.options);
  bool inconclusive = false;
  OrderedJson per_alpha = OrderedJson::array();
  for (const SeriesDiagnostics& d : b.per_alpha) {
    inconclusive = inconclusive || d.verdict == SeriesClass::inconclusive;
    per_alpha.push_back({{"alpha", d.alpha},
                         {"dimension", 1.0 / (1.0 - d.alpha)},
                         {"verdict", to_string(d.verdict)},
                         {"step_costs", d.step_costs},
                         {"ratios", d.ratios}});
  }
  OrderedJson bracket;
  bracket["lower"] = b.lower;
  bracket["upper"] = std::isfinite(b.upper) ? OrderedJson(b.upper) : OrderedJson(nullptr);
  bracket["width"] = std::isfinite(b.upper) ? OrderedJson(b.upper - b.lower) : OrderedJson(nullptr);
  bracket["has_inconclusive"] = inconclusive;
  out["transport_dimension"] = std::move(bracket);
  out["window"] = request.options.window;
  out["threshold"] = request.options.threshold;
  out["per_alpha"] = std::move(per_alpha);
  return out;
}

std::string render_svg(const TransportPath& g) {
  constexpr double size = 512.0;
  constexpr double margin = 32.0;
  constexpr int samples = 24;
  const Geometry geo = g.curvature().geometry();
  auto project = [&](const ModelPoint& p) -> std::pair<double, double> {
    const auto& c = p.coords();
    if (geo == Geometry::hyperbolic) return {c.x() / (1.0 + c.z()), c.y() / (1.0 + c.z())};
    return {c.x(), c.y()};
  };

  double lo_x = -1.0, hi_x = 1.0, lo_y = -1.0, hi_y = 1.0;
  if (geo == Geometry::plane) {
    lo_x = lo_y = std::numeric_limits<double>::infinity();
    hi_x = hi_y = -std::numeric_limits<double>::infinity();
    for (const ModelPoint& v : g.vertices()) {
      const auto [x, y] = project(v);
      lo_x = std::min(lo_x, x);
      hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y);
      hi_y = std::max(hi_y, y);
    }
    if (!std::isfinite(lo_x)) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double scale = (size - 2.0 * margin) / span;
  const double cx = (lo_x + hi_x) / 2.0;
  const double cy = (lo_y + hi_y) / 2.0;
  auto sx = [&](double x) { return svg_num(size / 2.0 + (x - cx) * scale); };
  auto sy = [&](double y) { return svg_num(size / 2.0 - (y - cy) * scale); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << " " << size << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (geo != Geometry::plane) {
    svg << "<circle cx=\"" << sx(0.0) << "\" cy=\"" << sy(0.0) << "\" r=\"" << svg_num(scale)
        << "\" fill=\"none\" stroke=\"#bbbbbb\"/>\n";
  }
  double max_weight = 0.0;
  for (const Edge& e : g.edges()) max_weight = std::max(max_weight, e.weight);
  for (const Edge& e : g.edges()) {
    const ModelPoint& a = g.vertices()[e.tail];
    const ModelPoint& b = g.vertices()[e.head];
    const bool hidden = geo == Geometry::sphere && geodesic_point(a, b, 0.5).coords().z() < 0.0;
    svg << "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"" << svg_num(1.0 + 5.0 * e.weight / max_weight)
        << "\"" << (hidden ? " stroke-dasharray=\"4 3\" stroke-opacity=\"0.5\"" : "") << " points=\"";
    for (int s = 0; s <= samples; ++s) {
      const auto [x, y] = project(geodesic_point(a, b, static_cast<double>(s) / samples));
      svg << (s ? " " : "") << sx(x) << "," << sy(y);
    }
    svg << "\"/>\n";
  }
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const auto [x, y] = project(g.vertices()[v]);
    const char* color = "#333333";
    double radius = 3.0;
    for (const Atom& atom : g.source().atoms()) {
      if (distance(atom.location, g.vertices()[v]) <= AtomicMeasure::merge_tolerance) color = "#c0392b", radius = 5.0;
    }
    for (const Atom& atom : g.sink().atoms()) {
      if (distance(atom.location, g.vertices()[v]) <= AtomicMeasure::merge_tolerance) color = "#27ae60", radius = 5.0;
    }
    svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"" << svg_num(radius) << "\" fill=\"" << color
        << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ramified::cli

#include "problem.hpp"

#include "ramified/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace ramified::cli {
namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing \"" + key + "\"");
  if (!it->is_number()) throw ParseError(where + ": \"" + key + "\" must be a number");
  return it->get<double>();
}

template <typename T>
T integer_field(const json& obj, const char* key, T fallback, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() || (std::is_unsigned_v<T> && it->get<long long>() < 0)) {
    throw ParseError(where + ": \"" + key + "\" must be a nonnegative integer");
  }
  return it->get<T>();
}

ModelPoint parse_location(Curvature k, const json& atom, const std::string& where) {
  if (atom.contains("coords")) {
    const json& c = atom["coords"];
    if (!c.is_array() || c.size() != 3 ||
        !std::all_of(c.begin(), c.end(), [](const json& v) { return v.is_number(); })) {
      throw ParseError(where + ": \"coords\" must be an array of three numbers");
    }
    return ModelPoint::from_embedding(k, {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()});
  }
  if (atom.contains("r") || atom.contains("phi")) {
    return ModelPoint::from_polar(k, number_field(atom, "r", where), number_field(atom, "phi", where));
  }
  const double x = number_field(atom, "x", where);
  const double y = number_field(atom, "y", where);
  if (k.value() == 0.0) return ModelPoint::plane(x, y);
  return ModelPoint::from_polar(k, std::hypot(x, y), std::atan2(y, x));
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ProblemSpec parse_problem(const json& doc) {
  if (!doc.is_object()) throw ParseError("spec must be a JSON object");
  ProblemSpec spec;
  spec.alpha = number_field(doc, "alpha", "spec");
  if (doc.contains("curvature")) spec.curvature = number_field(doc, "curvature", "spec");
  for (const char* side : {"sources", "sinks"}) {
    const auto it = doc.find(side);
    if (it == doc.end() || !it->is_array()) throw ParseError(std::string("spec: \"") + side + "\" must be an array");
    for (const json& atom : *it) {
      if (!atom.is_object()) throw ParseError(std::string(side) + ": atoms must be objects");
    }
    (std::string(side) == "sources" ? spec.sources : spec.sinks) = *it;
  }
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) throw ParseError("spec: \"solver\" must be an object");
    spec.solver.topology_limit = integer_field<std::size_t>(s, "topology_limit", spec.solver.topology_limit, "solver");
    spec.plan_limit = integer_field<std::size_t>(s, "plan_limit", spec.plan_limit, "solver");
    spec.solver.max_sweeps = integer_field<int>(s, "max_sweeps", spec.solver.max_sweeps, "solver");
    spec.solver.restarts = integer_field<int>(s, "restarts", spec.solver.restarts, "solver");
    spec.solver.seed = integer_field<std::uint64_t>(s, "seed", spec.solver.seed, "solver");
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) { return parse_problem(read_json_file(path)); }

AtomicMeasure build_measure(const ProblemSpec& spec, const json& atoms, const std::string& side) {
  const Curvature k(spec.curvature);
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = side + "[" + std::to_string(i) + "]";
    const double mass = number_field(atoms[i], "mass", where);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw ValidationError(where + ": mass must be positive and finite, got " + atoms[i]["mass"].dump());
    }
    try {
      out.push_back({parse_location(k, atoms[i], where), mass});
    } catch (const DomainError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (out.empty()) throw ValidationError(side + " must contain at least one atom");
  return AtomicMeasure(std::move(out));
}

Instance build_instance(const ProblemSpec& spec) {
  if (!std::isfinite(spec.alpha) || spec.alpha > 1.0) throw ValidationError("alpha must be finite and at most 1");
  Instance inst{build_measure(spec, spec.sources, "sources"), build_measure(spec, spec.sinks, "sinks")};
  const double ta = inst.sources.total_mass();
  const double tb = inst.sinks.total_mass();
  if (std::abs(ta - tb) > 1e-9 * std::max(ta, tb)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "total masses differ: sources " << ta << ", sinks " << tb;
    throw ValidationError(msg.str());
  }
  return inst;
}

}  // namespace ramified::cli

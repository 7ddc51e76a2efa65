#include "ramified/measure.hpp"

#include "ramified/error.hpp"

#include "point_lookup.hpp"

#include <cmath>
#include <string>

namespace ramified {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  detail::PointLookup kept(merge_tolerance);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (!std::isfinite(a.mass) || a.mass <= 0.0) {
      throw ValidationError("atom " + std::to_string(i) + " has nonpositive or non-finite mass " +
                            std::to_string(a.mass));
    }
    if (a.location.curvature() != atoms.front().location.curvature()) {
      throw ValidationError("atom " + std::to_string(i) + " has a different curvature tag");
    }
    const std::size_t match = kept.find(a.location);
    if (match != detail::PointLookup::npos) {
      atoms_[match].mass += a.mass;
    } else {
      kept.insert(a.location, atoms_.size());
      atoms_.push_back(a);
    }
  }
}

Curvature AtomicMeasure::curvature() const {
  return atoms_.empty() ? Curvature() : atoms_.front().location.curvature();
}

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  return s;
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ValidationError("mass scale factor must be positive and finite");
  }
  AtomicMeasure out;
  out.atoms_ = atoms_;
  for (Atom& a : out.atoms_) a.mass *= factor;
  return out;
}

double AtomicMeasure::mass_outside_ball(const ModelPoint& p, double r) const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (distance(p, a.location) > r) s += a.mass;
  }
  return s;
}

std::pair<AtomicMeasure, double> normalize(const AtomicMeasure& a) {
  if (a.empty()) throw ValidationError("cannot normalize an empty measure");
  const double total = a.total_mass();
  std::vector<Atom> atoms = a.atoms();
  for (Atom& atom : atoms) atom.mass /= total;
  return {AtomicMeasure(std::move(atoms)), total};
}

AtomicMeasure dirac(const ModelPoint& p, double mass) { return AtomicMeasure({Atom{p, mass}}); }

}  // namespace ramified

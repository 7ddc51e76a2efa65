#pragma once

#include "ramified/geometry.hpp"

#include <utility>
#include <vector>

namespace ramified {

struct Atom {
  ModelPoint location;
  double mass = 0.0;
};

/// Finite sum of point masses on one model surface.
///
/// Construction rejects nonpositive or non-finite masses and mixed curvature
/// tags, and coalesces atoms closer than merge_tolerance by summing masses.
class AtomicMeasure {
 public:
  static constexpr double merge_tolerance = 1e-9;

  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  /// Curvature of the atoms (0 for an empty measure).
  Curvature curvature() const;

  double total_mass() const;
  /// Same locations, every mass multiplied by factor > 0.
  AtomicMeasure scaled(double factor) const;
  /// Total mass of atoms strictly farther than r from p.
  double mass_outside_ball(const ModelPoint& p, double r) const;

 private:
  std::vector<Atom> atoms_;
};

/// Rescales to unit total mass. Returns the probability measure and the
/// original total mass. Throws ValidationError on an empty measure.
std::pair<AtomicMeasure, double> normalize(const AtomicMeasure& a);

/// Dirac mass at p.
AtomicMeasure dirac(const ModelPoint& p, double mass = 1.0);

}  // namespace ramified

#pragma once

// Exact geometry of the constant-curvature model surfaces M_k^2.
//
// Points are stored in an embedding chart:
//   k == 0  the Euclidean plane, coordinates (x, y, 0);
//   k  > 0  the unit sphere in R^3;
//   k  < 0  the upper sheet of the unit hyperboloid <c, c>_M = -1 in R^{2,1}.
// The curvature enters only as the distance prefactor 1/sqrt(|k|), so all
// interpolation happens on the unit model and lengths are rescaled on exit.

#include <Eigen/Core>

#include <array>
#include <utility>

namespace ramified {

enum class Geometry { plane, sphere, hyperbolic };

/// Sectional curvature k of a model surface (units 1/length^2).
class Curvature {
 public:
  constexpr Curvature() = default;
  explicit Curvature(double k);

  double value() const { return k_; }
  Geometry geometry() const;
  /// Length of one unit-model radian: 1/sqrt(|k|), or 1 in the plane.
  double length_scale() const;
  /// Diameter D_k: pi/sqrt(k) for k > 0, +infinity otherwise.
  double diameter() const;

  friend bool operator==(Curvature, Curvature) = default;

 private:
  double k_ = 0.0;
};

/// A point of M_k^2 in its embedding chart, tagged with its curvature.
class ModelPoint {
 public:
  ModelPoint() = default;

  static ModelPoint plane(double x, double y);
  /// Validates the chart constraint to 1e-9 and re-projects onto it.
  static ModelPoint from_embedding(Curvature k, const Eigen::Vector3d& coords);
  /// Geodesic polar coordinates (r in length units, phi in radians) about
  /// the chart base point: the origin, the north pole (0,0,1) or the
  /// hyperboloid apex (0,0,1).
  static ModelPoint from_polar(Curvature k, double r, double phi);

  Curvature curvature() const { return k_; }
  const Eigen::Vector3d& coords() const { return c_; }
  /// Inverse of from_polar: (distance to base point, azimuth).
  std::pair<double, double> polar() const;

 private:
  ModelPoint(Curvature k, const Eigen::Vector3d& c) : k_(k), c_(c) {}

  Curvature k_;
  Eigen::Vector3d c_ = Eigen::Vector3d::Zero();
};

/// Base point of the chart for curvature k.
ModelPoint base_point(Curvature k);

/// Geodesic distance. Throws DomainError on mismatched curvature tags.
double distance(const ModelPoint& p, const ModelPoint& q);

/// Point at fraction t of the unique geodesic from p to q.
/// Throws DomainError for antipodal points on the sphere.
ModelPoint geodesic_point(const ModelPoint& p, const ModelPoint& q, double t);

/// Interior angle, opposite to side `opposite`, of the comparison triangle
/// in M_k^2 whose two other sides have lengths `side1` and `side2`.
double comparison_angle(double side1, double side2, double opposite, Curvature k);

/// Comparison angle at `vertex` between `a` and `b`.
double comparison_angle(const ModelPoint& a, const ModelPoint& vertex, const ModelPoint& b);

// Tangent-space helpers on the unit model. A tangent vector at p is an
// ambient 3-vector orthogonal to p (Euclidean product on the sphere,
// Minkowski product on the hyperboloid, z = 0 in the plane). Its unit-model
// norm times length_scale() is its metric length.

/// Inner product of two tangent vectors at the same point (unit model).
double tangent_dot(Curvature k, const Eigen::Vector3d& u, const Eigen::Vector3d& v);
double tangent_norm(Curvature k, const Eigen::Vector3d& v);
/// Initial velocity of the geodesic p -> q, with unit-model norm equal to
/// the unit-model distance.
Eigen::Vector3d log_map(const ModelPoint& p, const ModelPoint& q);
ModelPoint exp_map(const ModelPoint& p, const Eigen::Vector3d& v);
/// Orthonormal basis (unit model) of the tangent plane at p.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const ModelPoint& p);
/// Velocity at parameter s of the unit-speed geodesic exp_p(s u), |u| = 1.
Eigen::Vector3d geodesic_velocity(const ModelPoint& p, const Eigen::Vector3d& u, double s);

}  // namespace ramified

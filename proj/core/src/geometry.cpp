#include "ramified/geometry.hpp"

#include "ramified/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace ramified {
namespace {

constexpr double kChartTolerance = 1e-9;
constexpr double kClampTolerance = 1e-12;
// Unit-model separation below which two sphere points count as antipodal.
constexpr double kAntipodalMargin = 1e-9;

double minkowski_dot(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  return u.x() * v.x() + u.y() * v.y() - u.z() * v.z();
}

void require_same_curvature(const ModelPoint& p, const ModelPoint& q) {
  if (p.curvature() != q.curvature()) {
    throw DomainError("points carry different curvature tags (" + std::to_string(p.curvature().value()) + " vs " +
                      std::to_string(q.curvature().value()) + ")");
  }
}

// Distance on the unit model (radians on the sphere / hyperboloid).
double unit_distance(const ModelPoint& p, const ModelPoint& q) {
  const Eigen::Vector3d& a = p.coords();
  const Eigen::Vector3d& b = q.coords();
  switch (p.curvature().geometry()) {
    case Geometry::plane:
      return (a - b).norm();
    case Geometry::sphere:
      return std::atan2(a.cross(b).norm(), a.dot(b));
    case Geometry::hyperbolic: {
      const Eigen::Vector3d d = a - b;
      const double s = std::max(0.0, minkowski_dot(d, d));
      return 2.0 * std::asinh(0.5 * std::sqrt(s));
    }
  }
  return 0.0;
}

Eigen::Vector3d project_to_chart(Geometry g, const Eigen::Vector3d& c) {
  switch (g) {
    case Geometry::plane:
      return {c.x(), c.y(), 0.0};
    case Geometry::sphere:
      return c / c.norm();
    case Geometry::hyperbolic:
      return c / std::sqrt(-minkowski_dot(c, c));
  }
  return c;
}

}  // namespace

Curvature::Curvature(double k) : k_(k) {
  if (!std::isfinite(k)) throw DomainError("curvature must be finite");
}

Geometry Curvature::geometry() const {
  if (k_ > 0.0) return Geometry::sphere;
  if (k_ < 0.0) return Geometry::hyperbolic;
  return Geometry::plane;
}

double Curvature::length_scale() const { return k_ == 0.0 ? 1.0 : 1.0 / std::sqrt(std::abs(k_)); }

double Curvature::diameter() const {
  return k_ > 0.0 ? std::numbers::pi / std::sqrt(k_) : std::numeric_limits<double>::infinity();
}

ModelPoint ModelPoint::plane(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("plane coordinates must be finite");
  return ModelPoint(Curvature(0.0), Eigen::Vector3d(x, y, 0.0));
}

ModelPoint ModelPoint::from_embedding(Curvature k, const Eigen::Vector3d& c) {
  if (!c.allFinite()) throw DomainError("embedding coordinates must be finite");
  switch (k.geometry()) {
    case Geometry::plane:
      if (std::abs(c.z()) > kChartTolerance) {
        throw DomainError("plane points must have zero third coordinate");
      }
      break;
    case Geometry::sphere:
      if (std::abs(c.squaredNorm() - 1.0) > kChartTolerance) {
        throw DomainError("sphere points must have unit Euclidean norm");
      }
      break;
    case Geometry::hyperbolic: {
      const double m = minkowski_dot(c, c);
      if (c.z() <= 0.0 || std::abs(m + 1.0) > kChartTolerance * std::max(1.0, c.squaredNorm())) {
        throw DomainError("hyperboloid points need <c,c> = -1 and positive time coordinate");
      }
      break;
    }
  }
  return ModelPoint(k, project_to_chart(k.geometry(), c));
}

ModelPoint ModelPoint::from_polar(Curvature k, double r, double phi) {
  if (!std::isfinite(r) || !std::isfinite(phi)) throw DomainError("polar coordinates must be finite");
  const double rho = r / k.length_scale();
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  switch (k.geometry()) {
    case Geometry::plane:
      return ModelPoint(k, Eigen::Vector3d(r * cphi, r * sphi, 0.0));
    case Geometry::sphere:
      return ModelPoint(k, Eigen::Vector3d(std::sin(rho) * cphi, std::sin(rho) * sphi, std::cos(rho)));
    case Geometry::hyperbolic:
      return ModelPoint(k, Eigen::Vector3d(std::sinh(rho) * cphi, std::sinh(rho) * sphi, std::cosh(rho)));
  }
  return {};
}

std::pair<double, double> ModelPoint::polar() const {
  const double planar = std::hypot(c_.x(), c_.y());
  const double phi = std::atan2(c_.y(), c_.x());
  switch (k_.geometry()) {
    case Geometry::plane:
      return {planar, phi};
    case Geometry::sphere:
      return {std::atan2(planar, c_.z()) * k_.length_scale(), phi};
    case Geometry::hyperbolic:
      return {std::asinh(planar) * k_.length_scale(), phi};
  }
  return {0.0, 0.0};
}

ModelPoint base_point(Curvature k) { return ModelPoint::from_polar(k, 0.0, 0.0); }

double distance(const ModelPoint& p, const ModelPoint& q) {
  require_same_curvature(p, q);
  return unit_distance(p, q) * p.curvature().length_scale();
}

ModelPoint geodesic_point(const ModelPoint& p, const ModelPoint& q, double t) {
  require_same_curvature(p, q);
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  const Curvature k = p.curvature();
  const Eigen::Vector3d& a = p.coords();
  const Eigen::Vector3d& b = q.coords();
  switch (k.geometry()) {
    case Geometry::plane:
      return ModelPoint::plane(a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y()));
    case Geometry::sphere: {
      const double theta = unit_distance(p, q);
      if (theta > std::numbers::pi - kAntipodalMargin) {
        throw DomainError("antipodal points have no unique geodesic");
      }
      if (theta == 0.0) return p;
      const double s = std::sin(theta);
      const Eigen::Vector3d c = (std::sin((1.0 - t) * theta) / s) * a + (std::sin(t * theta) / s) * b;
      return ModelPoint::from_embedding(k, c / c.norm());
    }
    case Geometry::hyperbolic: {
      const double theta = unit_distance(p, q);
      if (theta == 0.0) return p;
      const double s = std::sinh(theta);
      const Eigen::Vector3d c = (std::sinh((1.0 - t) * theta) / s) * a + (std::sinh(t * theta) / s) * b;
      return ModelPoint::from_embedding(k, project_to_chart(Geometry::hyperbolic, c));
    }
  }
  return p;
}

double comparison_angle(double side1, double side2, double opposite, Curvature k) {
  if (!(side1 > 0.0) || !(side2 > 0.0) || !(opposite >= 0.0) || !std::isfinite(side1 + side2 + opposite)) {
    throw DomainError("comparison triangle needs positive adjacent sides and a nonnegative opposite side");
  }
  const double slack = kClampTolerance * (side1 + side2 + opposite);
  if (opposite > side1 + side2 + slack || opposite < std::abs(side1 - side2) - slack) {
    throw DomainError("side lengths violate the triangle inequality");
  }
  const double scale = k.length_scale();
  const double a = side1 / scale;
  const double b = side2 / scale;
  const double c = opposite / scale;

  // x = sin^2(angle / 2), written as a product to avoid cancellation.
  double x = 0.0;
  switch (k.geometry()) {
    case Geometry::plane:
      x = (c - a + b) * (c + a - b) / (4.0 * a * b);
      break;
    case Geometry::sphere: {
      const double d = k.diameter() + slack;
      if (side1 >= d || side2 >= d || opposite >= d) {
        throw DomainError("spherical comparison sides must be shorter than the diameter");
      }
      x = std::sin(0.5 * (c + a - b)) * std::sin(0.5 * (c - a + b)) / (std::sin(a) * std::sin(b));
      break;
    }
    case Geometry::hyperbolic:
      x = std::sinh(0.5 * (c + a - b)) * std::sinh(0.5 * (c - a + b)) / (std::sinh(a) * std::sinh(b));
      break;
  }
  if (x < -kClampTolerance || x > 1.0 + kClampTolerance || std::isnan(x)) {
    throw DomainError("comparison triangle does not exist for the given sides");
  }
  x = std::clamp(x, 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(x));
}

double comparison_angle(const ModelPoint& a, const ModelPoint& vertex, const ModelPoint& b) {
  return comparison_angle(distance(vertex, a), distance(vertex, b), distance(a, b), vertex.curvature());
}

double tangent_dot(Curvature k, const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  return k.geometry() == Geometry::hyperbolic ? minkowski_dot(u, v) : u.dot(v);
}

double tangent_norm(Curvature k, const Eigen::Vector3d& v) { return std::sqrt(std::max(0.0, tangent_dot(k, v, v))); }

Eigen::Vector3d log_map(const ModelPoint& p, const ModelPoint& q) {
  require_same_curvature(p, q);
  const Curvature k = p.curvature();
  const Eigen::Vector3d d = q.coords() - p.coords();
  if (k.geometry() == Geometry::plane) return d;
  const double theta = unit_distance(p, q);
  if (theta == 0.0) return Eigen::Vector3d::Zero();
  if (k.geometry() == Geometry::sphere && theta > std::numbers::pi - kAntipodalMargin) {
    throw DomainError("antipodal points have no unique geodesic");
  }
  // Remove the normal component; what remains has norm sin/sinh(theta).
  const Eigen::Vector3d& x = p.coords();
  Eigen::Vector3d v = k.geometry() == Geometry::sphere ? Eigen::Vector3d(d - d.dot(x) * x)
                                                       : Eigen::Vector3d(d + minkowski_dot(d, x) * x);
  const double n = tangent_norm(k, v);
  if (n == 0.0) return Eigen::Vector3d::Zero();
  return v * (theta / n);
}

ModelPoint exp_map(const ModelPoint& p, const Eigen::Vector3d& v) {
  const Curvature k = p.curvature();
  const Eigen::Vector3d& x = p.coords();
  switch (k.geometry()) {
    case Geometry::plane:
      return ModelPoint::plane(x.x() + v.x(), x.y() + v.y());
    case Geometry::sphere: {
      const double n = v.norm();
      if (n == 0.0) return p;
      return ModelPoint::from_embedding(k, project_to_chart(Geometry::sphere, std::cos(n) * x + (std::sin(n) / n) * v));
    }
    case Geometry::hyperbolic: {
      const double n = tangent_norm(k, v);
      if (n == 0.0) return p;
      return ModelPoint::from_embedding(
          k, project_to_chart(Geometry::hyperbolic, std::cosh(n) * x + (std::sinh(n) / n) * v));
    }
  }
  return p;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const ModelPoint& p) {
  const Curvature k = p.curvature();
  const Eigen::Vector3d& x = p.coords();
  if (k.geometry() == Geometry::plane) return {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()};
  // Gram-Schmidt of the coordinate axes against p in the ambient product.
  auto project = [&](Eigen::Vector3d v) {
    const double c = tangent_dot(k, v, x) / tangent_dot(k, x, x);
    return Eigen::Vector3d(v - c * x);
  };
  std::vector<Eigen::Vector3d> basis;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Vector3d v = project(Eigen::Vector3d::Unit(axis));
    for (const Eigen::Vector3d& b : basis) v -= tangent_dot(k, v, b) * b;
    const double n = tangent_norm(k, v);
    if (n > 0.5) basis.push_back(v / n);
    if (basis.size() == 2) break;
  }
  const Eigen::Vector3d e1 = basis[0];
  const Eigen::Vector3d e2 = basis[1];
  return {e1, e2};
}

Eigen::Vector3d geodesic_velocity(const ModelPoint& p, const Eigen::Vector3d& u, double s) {
  const Eigen::Vector3d& x = p.coords();
  switch (p.curvature().geometry()) {
    case Geometry::plane:
      return u;
    case Geometry::sphere:
      return -std::sin(s) * x + std::cos(s) * u;
    case Geometry::hyperbolic:
      return std::sinh(s) * x + std::cosh(s) * u;
  }
  return u;
}

}  // namespace ramified

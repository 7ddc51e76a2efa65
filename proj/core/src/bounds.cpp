#include "ramified/bounds.hpp"

#include "ramified/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ramified {
namespace {

constexpr double kPiHalfSquared = std::numbers::pi * std::numbers::pi / 4.0;
constexpr double kPhiInverseFloor = -1e6;

void require_below_one(double alpha) {
  if (!(alpha < 1.0)) throw DomainError("alpha must be below 1");
}

}  // namespace

double r_of_masses(double m1, double m2, double alpha) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("edge masses must be positive");
  if (!(alpha <= 1.0)) throw DomainError("alpha must be at most 1");
  if (alpha == 0.0) return std::sqrt(3.0);
  if (alpha == 0.5) return std::numbers::sqrt2;
  if (alpha == 1.0) return 0.0;
  // Mass fractions keep the powers in range for very negative alpha.
  const double k1 = m1 / (m1 + m2);
  const double k2 = m2 / (m1 + m2);
  const double p1 = std::pow(k1, alpha);
  const double p2 = std::pow(k2, alpha);
  const double num = (p1 + p2) * (p1 + p2) - 1.0;
  return std::sqrt(std::max(0.0, num / (p1 * p2)));
}

double r_alpha(double alpha) {
  require_below_one(alpha);
  if (alpha > 0.0 && alpha < 0.5) return std::numbers::sqrt2;
  return std::sqrt(4.0 - std::pow(4.0, alpha));
}

double r_bar_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0, 1)");
  if (alpha >= 0.5) return std::numbers::sqrt2;
  return std::sqrt(4.0 - std::pow(4.0, alpha));
}

double pair_angle_bound(double m1, double m2, double alpha) {
  const double r = r_of_masses(m1, m2, alpha);
  return std::acos(std::clamp(1.0 - r * r / 2.0, -1.0, 1.0));
}

double theta_alpha(double alpha) {
  require_below_one(alpha);
  if (alpha > 0.0 && alpha <= 0.5) return std::numbers::pi / 2.0;
  return std::acos(std::clamp(std::pow(2.0, 2.0 * alpha - 1.0) - 1.0, -1.0, 1.0));
}

double k_i_lower_bound(double alpha) {
  if (!(alpha < 0.0)) throw DomainError("mass comparability bound needs alpha < 0");
  // (1 + 2^a)^(-1/a) in log form so alpha near 0 overflows gracefully to 0.
  const double log_ratio = -std::log1p(std::pow(2.0, alpha)) / alpha;
  return 1.0 / (1.0 + std::exp(log_ratio));
}

double psi(double x, double y) {
  if (!(x <= kPiHalfSquared)) throw DomainError("psi needs x <= (pi/2)^2");
  if (!(y > 0.0 && y <= 2.0)) throw DomainError("psi needs 0 < y <= 2");
  if (x == 0.0) return y / 2.0;
  if (x > 0.0) {
    const double s = std::sqrt(x);
    return std::asin(std::min(1.0, y / 2.0 * std::sin(s))) / s;
  }
  const double s = std::sqrt(-x);
  if (s < 700.0) return std::asinh(y / 2.0 * std::sinh(s)) / s;
  // asinh(z) = ln(2z) + O(z^-2) with ln(2z) = s + ln(y/2) + ln(1 - e^{-2s}).
  return (s + std::log(y / 2.0) + std::log1p(-std::exp(-2.0 * s))) / s;
}

double phi(double x, double alpha) { return 1.0 + std::log1p(1.0 / psi(x, r_alpha(alpha))) / std::numbers::ln2; }

double phi_upper_bound(double alpha) {
  const double c = 2.0 / std::numbers::pi * std::asin(r_alpha(alpha) / 2.0);
  return 1.0 + std::log1p(1.0 / c) / std::numbers::ln2;
}

double degree_bound(double doubling_constant, double x, double alpha) {
  if (!(doubling_constant >= 1.0)) throw DomainError("doubling constant must be at least 1");
  return 2.0 * std::pow(doubling_constant, phi(x, alpha));
}

CurvatureBound curvature_lower_bound(double degree, double doubling_constant, double alpha, double r) {
  if (!(doubling_constant > 1.0)) throw DomainError("curvature bound needs a doubling constant above 1");
  if (!(r > 0.0)) throw DomainError("probe radius must be positive");
  require_below_one(alpha);
  const double floor_degree = 2.0 * doubling_constant * doubling_constant;
  if (degree < floor_degree * (1.0 - 1e-12)) {
    throw DomainError("curvature bound needs degree >= 2 C_d^2");
  }
  const double target = std::log(degree / 2.0) / std::log(doubling_constant);
  if (target > phi(kPiHalfSquared, alpha)) {
    throw DomainError("degree exceeds every value of the bound; no curvature is consistent");
  }
  if (target <= phi(kPhiInverseFloor, alpha)) {
    return {-std::numeric_limits<double>::infinity(), false};
  }
  double lo = kPhiInverseFloor;
  double hi = kPiHalfSquared;
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid, alpha) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi) / (r * r), true};
}

}  // namespace ramified

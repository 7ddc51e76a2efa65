#pragma once

// Closed-form bounds for branch vertices of alpha-optimal transport paths on
// spaces of curvature bounded above by k.

namespace ramified {

/// R(m1, m2, alpha) = sqrt(((m1^a + m2^a)^2 - (m1 + m2)^(2a)) / (m1^a m2^a)).
/// Exactly sqrt(3), sqrt(2) and 0 at alpha = 0, 1/2, 1.
double r_of_masses(double m1, double m2, double alpha);

/// Infimum of R over mass pairs, alpha < 1.
double r_alpha(double alpha);

/// Supremum of R over mass pairs, 0 <= alpha < 1.
double r_bar_alpha(double alpha);

/// Lower bound on the angle between two edges leaving (or entering) a vertex
/// with weights m1, m2: arccos(1 - R^2 / 2).
double pair_angle_bound(double m1, double m2, double alpha);

/// Universal angle bound: pi/2 on (0, 1/2], arccos(2^(2a-1) - 1) otherwise.
double theta_alpha(double alpha);

/// Lower bound 1 / (1 + (1 + 2^a)^(-1/a)) on the mass fraction of either of
/// two edges at a common vertex, alpha < 0.
double k_i_lower_bound(double alpha);

/// Psi(x, y) for x <= (pi/2)^2, 0 < y <= 2; Psi(0, y) = y/2.
double psi(double x, double y);

/// Phi(x, alpha) = 1 + log2(1 + 1/Psi(x, R_alpha)).
double phi(double x, double alpha);

/// 1 + log2(1 + 1/C_alpha) with C_alpha = (2/pi) arcsin(R_alpha / 2).
double phi_upper_bound(double alpha);

/// 2 C_d^Phi(x, alpha): the vertex degree bound at x = r^2 k.
double degree_bound(double doubling_constant, double x, double alpha);

struct CurvatureBound {
  double value;
  /// False when the degree only implies the vacuous bound k > -infinity.
  bool informative;
};

/// k >= Phi_alpha^{-1}(log_{C_d}(deg / 2)) / r^2, inverted by bisection over
/// x in [-1e6, (pi/2)^2]. Requires deg >= 2 C_d^2 and C_d > 1.
CurvatureBound curvature_lower_bound(double degree, double doubling_constant, double alpha, double r);

}  // namespace ramified

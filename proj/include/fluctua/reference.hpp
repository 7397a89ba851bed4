#pragma once

#include "fluctua/linalg.hpp"

namespace fluctua::ref {

// Closed-form reference solutions. These are evaluated from the analytic
// expressions only and stay independent of the numerical integration paths
// they are used to cross-check.

/// Single-spin macroscopic flow: requires omega_1^2 + omega_2^2 > 0.
Vec spin_macro(const Vec& omega0, double t);

/// Accumulated rotation phase of the emergent single-spin unitary,
/// normalized so that gamma(t) omega_i = integral of omega_i(s) ds / ... the
/// common decay ratio; gamma(0) = 0 and gamma'(0) = -1.
double spin_gamma(const Vec& omega0, double t);

/// Two-chain fluctuation propagator at the (0,0,-zeta,0,0,-zeta) fixed point.
Mat twochain_X(double b, double zeta, double t);

/// Two-chain accumulated noise at the same fixed point.
Mat twochain_Y(double a, double b, double zeta, double t);

/// Asymptotic covariance X_inf Sigma0 X_inf^T + Y_inf with Sigma0 = 1/(4 zeta).
Mat twochain_Sigma_inf(double a, double b, double zeta);

}  // namespace fluctua::ref

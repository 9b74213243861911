#pragma once

#include "crgg/cantor_model.hpp"

namespace crgg {

namespace specfun {

/// Gamma function on (0, 172), Lanczos approximation, relative error ~1e-14.
double gamma(double x);

/// Riemann zeta on s > 1, alternating-series acceleration.
double zeta(double s);

/// Regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0, x >= 0.
double gamma_q(double a, double x);

/// Complement P(a, x) = 1 - Q(a, x).
double gamma_p(double a, double x);

}  // namespace specfun

/// The first-order coefficient of the expected-threshold decay,
/// C(phi) = (1-phi)(1-2phi)/(phi log 2) * Gamma(1/d) * zeta(1/d), 1/d = -log2 phi.
struct RateConstant {
  Rational phi;
  double value = 0.0;
  double gamma_factor = 0.0;
  double zeta_factor = 0.0;
  double exponent = 0.0;   // 1/d_phi, always > 1 on (0, 1/2)
  double est_error = 0.0;  // linear combination of the two factor tolerances
};

RateConstant rate_constant(const CantorParams& params);

}  // namespace crgg

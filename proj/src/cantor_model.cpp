#include "crgg/cantor_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crgg {

int default_depth(const Rational& phi) {
  // least D with phi^D <= 2^-53 * (1 - phi)
  const Rational target = Rational(1, 1L << 30) * Rational(1, 1L << 23) * (Rational(1) - phi);
  Rational power = phi;
  int d = 1;
  while (power > target) {
    power *= phi;
    ++d;
    if (d > 4096) throw std::runtime_error("default_depth: phi too close to 1");
  }
  return d;
}

CantorParams make_params(const Rational& phi, int depth) {
  if (!(Rational(0) < phi && phi < Rational(1, 2))) {
    throw std::domain_error("phi must lie in the open interval (0, 1/2); got " + phi.str());
  }
  CantorParams p;
  p.phi = phi;
  p.depth = depth > 0 ? depth : default_depth(phi);
  p.dim = -std::log(2.0) / std::log(phi.to_double());
  p.gap = Rational(1) - Rational(2) * phi;

  // smallest K with phi^K < (1-phi)(1-2phi)/2, found by linear search; K stays small
  const Rational rhs = (Rational(1) - phi) * p.gap * Rational(1, 2);
  Rational power = phi;
  int k = 1;
  while (!(power < rhs)) {
    power *= phi;
    ++k;
    if (k > 62) throw std::domain_error("phi too close to 1/2: occupancy depth exceeds 62");
  }
  p.occupancy_depth = k;
  return p;
}

CdfValue cantor_cdf(const CantorParams& params, double t, int max_levels) {
  if (!(max_levels >= 1)) throw std::domain_error("max_levels must be >= 1");
  if (std::isnan(t)) throw std::domain_error("cantor_cdf: t must not be NaN");
  if (t <= 0.0) return {0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0};

  // Branch decisions are made in exact rational arithmetic on the exact value of
  // the double t, so a wrong branch is impossible and the returned enclosure is
  // rigorous. Floating-point rescaling would amplify input noise by 1/phi per
  // level and cap certified precision near 2^-32; rationals stay small enough
  // here (numerators below q^levels * 2^54) that exactness is cheap.
  Rational x = Rational::from_double(t);
  const Rational& phi = params.phi;
  const Rational upper = Rational(1, 1) - phi;
  double base = 0.0;    // accumulated CDF mass to the left of the current window
  double weight = 1.0;  // CDF mass of the current window
  for (int level = 0; level < max_levels; ++level) {
    if (x < phi) {
      weight *= 0.5;
      x = x / phi;
    } else if (x > upper) {
      base += weight * 0.5;
      weight *= 0.5;
      x = (x - upper) / phi;
    } else {
      // in the closed middle gap [phi, 1-phi], where F is exactly flat; the
      // dyadic value is exact in a double until the accumulation passes 53 bits
      return {base + weight * 0.5, level < 52 ? 0.0 : 4e-16};
    }
  }
  return {base + weight * 0.5, weight * 0.5};
}

Rational theoretical_limit(const CantorParams& params) { return params.gap; }

}  // namespace crgg

#include "crgg/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace crgg::specfun {

namespace detail {

constexpr int kZetaTerms = 48;

// Relative error bound of the accelerated eta series at s > 1.
double zeta_error_bound(double s) {
  const double denom = std::abs(1.0 - std::pow(2.0, 1.0 - s));
  return 3.0 / (std::pow(3.0 + std::sqrt(8.0), kZetaTerms) * denom);
}

// Chebyshev-derived acceleration weights d_0..d_n: cumulative sums of
// t_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), t_0 = 1.
const std::vector<double>& zeta_weights() {
  static const std::vector<double> d = [] {
    const double n = kZetaTerms;
    std::vector<double> v(kZetaTerms + 1);
    double t = 1.0;
    double sum = 1.0;
    v[0] = sum;
    for (int i = 1; i <= kZetaTerms; ++i) {
      t *= (n + i - 1.0) * (n - i + 1.0) * 4.0 / ((2.0 * i - 1.0) * (2.0 * i));
      sum += t;
      v[i] = sum;
    }
    return v;
  }();
  return d;
}

}  // namespace detail

namespace {

// Lanczos, g = 7, 9 terms, valid for arguments >= 0.5.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,    -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7,
};

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  // Lentz's algorithm for the standard continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || !(x < 172.0)) {
    throw std::domain_error("gamma: argument must lie in (0, 172); got " + std::to_string(x));
  }
  if (x < 0.5) {
    // reflection keeps the Lanczos argument away from 0
    return M_PI / (std::sin(M_PI * x) * gamma(1.0 - x));
  }
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double zeta(double s) {
  if (!(s > 1.0)) {
    throw std::domain_error("zeta: argument must satisfy s > 1; got " + std::to_string(s));
  }
  const std::vector<double>& d = detail::zeta_weights();
  const double dn = d[detail::kZetaTerms];
  double acc = 0.0;
  double sign = 1.0;
  for (int k = 0; k < detail::kZetaTerms; ++k) {
    acc += sign * (d[k] - dn) * std::pow(static_cast<double>(k + 1), -s);
    sign = -sign;
  }
  return -acc / (dn * (1.0 - std::pow(2.0, 1.0 - s)));
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be positive");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: a must be positive");
  if (x < 0.0) throw std::domain_error("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

}  // namespace crgg::specfun

namespace crgg {

RateConstant rate_constant(const CantorParams& params) {
  RateConstant rc;
  rc.phi = params.phi;
  const double phi = params.phi.to_double();
  rc.exponent = -std::log2(phi);  // equals 1/dim
  rc.gamma_factor = specfun::gamma(rc.exponent);
  rc.zeta_factor = specfun::zeta(rc.exponent);
  const double prefactor = (1.0 - phi) * params.gap.to_double() / (phi * std::log(2.0));
  rc.value = prefactor * rc.gamma_factor * rc.zeta_factor;
  const double rel_gamma = 1e-13;
  const double rel_zeta = specfun::detail::zeta_error_bound(rc.exponent) + 1e-14;
  rc.est_error = rc.value * (rel_gamma + rel_zeta);
  return rc;
}

}  // namespace crgg

#include "crgg/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "crgg/specfun.hpp"

namespace crgg::stats {

MeanStderr mean_stderr(std::span<const double> xs) {
  if (xs.empty()) throw std::domain_error("mean_stderr: empty sample");
  MeanStderr ms;
  ms.count = xs.size();
  double sum = 0.0;
  for (const double x : xs) sum += x;
  ms.mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) return ms;
  double ss = 0.0;
  for (const double x : xs) {
    const double d = x - ms.mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(xs.size() - 1);
  ms.se = std::sqrt(var / static_cast<double>(xs.size()));
  return ms;
}

double quantile_sorted(std::span<const double> sorted_xs, double q) {
  if (sorted_xs.empty()) throw std::domain_error("quantile_sorted: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile_sorted: q must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted_xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted_xs.size()) return sorted_xs.back();
  const double w = h - static_cast<double>(lo);
  return sorted_xs[lo] + w * (sorted_xs[lo + 1] - sorted_xs[lo]);
}

double dkw_epsilon(std::size_t n, double alpha) {
  if (n == 0) throw std::domain_error("dkw_epsilon: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("dkw_epsilon: alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double ks_statistic(std::span<const double> sorted_xs, const std::function<double(double)>& cdf) {
  if (sorted_xs.empty()) throw std::domain_error("ks_statistic: empty sample");
  const double n = static_cast<double>(sorted_xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_xs.size(); ++i) {
    const double f = cdf(sorted_xs[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  return d;
}

double chi_square_stat(std::span<const std::uint64_t> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_stat: observed and expected sizes must match and be nonzero");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw std::domain_error("chi_square_stat: expected counts must be positive");
    const double d = static_cast<double>(observed[i]) - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

double chi_square_pvalue(double stat, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_pvalue: dof must be >= 1");
  if (stat < 0.0) throw std::domain_error("chi_square_pvalue: stat must be nonnegative");
  if (stat == 0.0) return 1.0;
  return specfun::gamma_q(0.5 * static_cast<double>(dof), 0.5 * stat);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need matching x/y of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::domain_error("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() >= 3) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      sse += r * r;
    }
    fit.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return fit;
}

}  // namespace crgg::stats

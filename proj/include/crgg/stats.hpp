#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace crgg::stats {

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

/// Two-pass sample mean and standard error, accumulated in index order.
MeanStderr mean_stderr(std::span<const double> xs);

/// Linear-interpolation quantile of an ascending-sorted sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted_xs, double q);

/// Dvoretzky-Kiefer-Wolfowitz band half-width at confidence 1 - alpha.
double dkw_epsilon(std::size_t n, double alpha);

/// Kolmogorov-Smirnov statistic sup |F_hat - F| against the given CDF.
double ks_statistic(std::span<const double> sorted_xs, const std::function<double(double)>& cdf);

/// Pearson statistic over observed counts vs expected (same length, expected > 0).
double chi_square_stat(std::span<const std::uint64_t> observed, std::span<const double> expected);

/// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_pvalue(double stat, int dof);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares fit y = slope * x + intercept; needs >= 3 points for slope_se.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace crgg::stats

#pragma once

#include <vector>

#include "crgg/rational.hpp"
#include "crgg/specfun.hpp"

namespace crgg {

/// Exact expected minima a_n = E[min of n points], n = 1..n_max, reduced rationals.
struct ExactSequence {
  Rational phi;
  int n_max = 0;
  std::vector<Rational> values;  // values[n-1] = a_n

  const Rational& at(int n) const {
    if (n < 1 || n > n_max) {
      throw std::out_of_range("ExactSequence::at: n out of range [1, " + std::to_string(n_max) + "]");
    }
    return values[static_cast<std::size_t>(n) - 1];
  }
};

/// Solves the closed recursion (2^n - 2 phi) a_n = (1 - phi) + phi * sum_{k<n} C(n,k) a_k
/// in exact arithmetic. Internally runs on a shared-denominator integer ladder and
/// reduces every value once at the end; outputs are canonical.
ExactSequence compute_sequence(const Rational& phi, int n_max);

/// rho_n = a_n * n^(1/d) / C(phi) for n = 1..n_max (index n-1).
/// Errors if `constant` was built for a different phi.
std::vector<double> sequence_asymptotic_ratio(const ExactSequence& seq, const RateConstant& constant);

/// Certified enclosure of a_n by direct integration of (1 - F)^n: exact dyadic
/// plateau values over deleted gaps up to `depth`, residual bracketed on both sides.
struct OracleInterval {
  double lo = 0.0;
  double hi = 0.0;
};

OracleInterval min_expectation_oracle(const Rational& phi, int n, int depth);

}  // namespace crgg

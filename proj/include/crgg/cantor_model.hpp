#pragma once

#include <cstdint>

#include "crgg/rational.hpp"

namespace crgg {

/// Immutable description of one Cantor(phi) model instance.
struct CantorParams {
  Rational phi;          // contraction ratio, 0 < phi < 1/2
  int depth = 0;         // series truncation depth used by the sampler
  double dim = 0.0;      // similarity dimension, -log 2 / log phi
  Rational gap;          // 1 - 2 phi, the central gap length
  int occupancy_depth = 0;  // least K with phi^K < (1-phi)(1-2phi)/2
};

/// CDF value with a certified enclosure half-width. error_bound == 0 means exact.
struct CdfValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Truncation depth that drives the sampler's series error below 2^-53:
/// least D with phi^D / (1 - phi) <= 2^-53.
int default_depth(const Rational& phi);

/// Validates phi and derives the dependent fields. depth <= 0 selects default_depth.
CantorParams make_params(const Rational& phi, int depth = 0);

/// Distribution function of the Cantor(phi) law at t, by self-similar descent.
/// max_levels bounds the descent; the returned error_bound is at most 2^-(max_levels+1).
CdfValue cantor_cdf(const CantorParams& params, double t, int max_levels = 64);

/// Almost-sure limit of the connectivity threshold: 1 - 2 phi, exact.
Rational theoretical_limit(const CantorParams& params);

}  // namespace crgg

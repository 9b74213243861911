#include <doctest.h>

#include "crgg/cantor_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace crgg;

TEST_CASE("make_params validates phi") {
  CHECK_THROWS_AS(make_params(Rational(1, 2)), std::domain_error);
  CHECK_THROWS_AS(make_params(Rational(0, 1)), std::domain_error);
  CHECK_THROWS_AS(make_params(Rational(-1, 3)), std::domain_error);
  CHECK_THROWS_AS(make_params(Rational(3, 5)), std::domain_error);
  CHECK_NOTHROW(make_params(Rational(1, 3)));
  CHECK_NOTHROW(make_params(Rational(49, 100)));
}

TEST_CASE("derived parameters for phi = 1/3") {
  const auto p = make_params(Rational(1, 3));
  CHECK(p.phi == Rational(1, 3));
  CHECK(p.gap == Rational(1, 3));
  CHECK(p.dim == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-15));
  CHECK(p.occupancy_depth == 3);
  CHECK(p.depth == 34);
  CHECK(theoretical_limit(p) == Rational(1, 3));
}

TEST_CASE("default truncation depth across phi") {
  CHECK(make_params(Rational(1, 4)).depth == 27);
  CHECK(make_params(Rational(2, 5)).depth == 41);
  CHECK(make_params(Rational(1, 3), 12).depth == 12);
}

TEST_CASE("occupancy depth across phi") {
  CHECK(make_params(Rational(1, 4)).occupancy_depth == 2);
  CHECK(make_params(Rational(2, 5)).occupancy_depth == 4);
  CHECK(make_params(Rational(1, 10)).occupancy_depth == 1);
  CHECK(make_params(Rational(49, 100)).occupancy_depth == 8);
}

TEST_CASE("cdf endpoints and gap plateaus are exact") {
  const auto p = make_params(Rational(1, 3));
  CHECK(cantor_cdf(p, 0.0).value == 0.0);
  CHECK(cantor_cdf(p, 0.0).error_bound == 0.0);
  CHECK(cantor_cdf(p, 1.0).value == 1.0);
  CHECK(cantor_cdf(p, -0.5).value == 0.0);
  CHECK(cantor_cdf(p, 1.5).value == 1.0);

  // level-1 gap (1/3, 2/3), level-2 gaps (1/9, 2/9) and (7/9, 8/9)
  CHECK(cantor_cdf(p, 0.5).value == 0.5);
  CHECK(cantor_cdf(p, 0.5).error_bound == 0.0);
  CHECK(cantor_cdf(p, 0.15).value == 0.25);
  CHECK(cantor_cdf(p, 0.15).error_bound == 0.0);
  CHECK(cantor_cdf(p, 0.8).value == 0.75);
  CHECK(cantor_cdf(p, 0.8).error_bound == 0.0);

  // fl(2/3) lies strictly inside the open gap, so the plateau value is exact
  CHECK(cantor_cdf(p, 2.0 / 3.0).value == 0.5);
  CHECK(cantor_cdf(p, 2.0 / 3.0).error_bound == 0.0);
  // fl(1/9) rounds below 1/9, so it sits in the support just left of the gap
  // (1/9, 2/9) and F lands a hair under the plateau; one ulp up is inside the
  // gap and exact
  const auto near_gap = cantor_cdf(p, 1.0 / 9.0);
  CHECK(near_gap.value < 0.25);
  CHECK(near_gap.value > 0.25 - 1e-9);
  CHECK(near_gap.error_bound == 0.0);
  CHECK(cantor_cdf(p, std::nextafter(1.0 / 9.0, 1.0)).value == 0.25);
  CHECK(cantor_cdf(p, std::nextafter(1.0 / 9.0, 1.0)).error_bound == 0.0);
}

TEST_CASE("cdf distinguishes fl(1/3) from the exact endpoint") {
  // fl(1/3) < 1/3, and F is continuous and strictly below 1/2 there
  const auto p = make_params(Rational(1, 3));
  const auto v = cantor_cdf(p, 1.0 / 3.0);
  CHECK(v.value < 0.5);
  CHECK(v.value > 0.4999999);
  CHECK(v.value + v.error_bound < 0.5);
}

TEST_CASE("cdf dyadic self-similarity for phi = 1/4") {
  const auto p = make_params(Rational(1, 4));
  CHECK(cantor_cdf(p, 0.25).value == 0.5);   // F at a cell endpoint
  CHECK(cantor_cdf(p, 0.0625).value == 0.25);
  CHECK(cantor_cdf(p, 5.0 / 16.0).value == 0.5);
  CHECK(cantor_cdf(p, 5.0 / 64.0).value == 0.25);
  CHECK(cantor_cdf(p, 5.0 / 64.0).error_bound == 0.0);
}

TEST_CASE("cdf symmetry F(t) + F(1-t) = 1") {
  const auto p = make_params(Rational(1, 3));
  for (double t : {0.15, 0.3, 0.41, 0.77, 0.9}) {
    const auto a = cantor_cdf(p, t);
    const auto b = cantor_cdf(p, 1.0 - t);
    CHECK(a.value + b.value ==
          doctest::Approx(1.0).epsilon(1e-9));  // 1-t rounds, Hölder-size drift
  }
}

TEST_CASE("cdf is monotone on a grid") {
  const auto p = make_params(Rational(1, 3));
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double v = cantor_cdf(p, i / 200.0).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(prev == 1.0);
}

TEST_CASE("cdf max_levels controls the enclosure") {
  const auto p = make_params(Rational(1, 3));
  const auto coarse = cantor_cdf(p, 0.3, 10);
  const auto fine = cantor_cdf(p, 0.3);
  CHECK(coarse.error_bound == std::ldexp(1.0, -11));
  CHECK(fine.error_bound <= std::ldexp(1.0, -33));
  CHECK(std::fabs(coarse.value - fine.value) <= coarse.error_bound);

  CHECK_THROWS_AS(cantor_cdf(p, 0.3, 0), std::domain_error);
  CHECK_THROWS_AS(cantor_cdf(p, std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

#include <doctest.h>

#include "crgg/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace crgg;

TEST_CASE("gamma at reference points") {
  CHECK(specfun::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(specfun::gamma(2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(specfun::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(specfun::gamma(0.5) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(specfun::gamma(std::log2(3.0)) ==
        doctest::Approx(0.8919102696643318206).epsilon(1e-13));
  CHECK(specfun::gamma(11.0) == doctest::Approx(3628800.0).epsilon(1e-13));
}

TEST_CASE("gamma satisfies the functional equation") {
  for (double x : {0.3, 0.7, 1.7, 10.4, 41.5, 101.25}) {
    CHECK(specfun::gamma(x + 1.0) ==
          doctest::Approx(x * specfun::gamma(x)).epsilon(1e-12));
  }
  for (double x : {3.5, 20.0, 95.0}) {
    CHECK(std::log(specfun::gamma(x)) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("gamma domain") {
  CHECK_THROWS_AS(specfun::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(specfun::gamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(specfun::gamma(172.0), std::domain_error);
  CHECK_NOTHROW(specfun::gamma(171.5));
}

TEST_CASE("zeta at reference points") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(specfun::zeta(2.0) == doctest::Approx(pi2 / 6.0).epsilon(1e-13));
  CHECK(specfun::zeta(4.0) == doctest::Approx(pi2 * pi2 / 90.0).epsilon(1e-13));
  CHECK(specfun::zeta(1.5) == doctest::Approx(2.612375348685488).epsilon(1e-12));
  CHECK(specfun::zeta(std::log2(3.0)) ==
        doctest::Approx(2.3276059295734838368).epsilon(1e-13));
  // for large s, zeta(s) - 1 ~ 2^-s
  CHECK(std::fabs(specfun::zeta(30.0) - 1.0 - std::pow(2.0, -30.0)) <
        2.0 * std::pow(3.0, -30.0));
}

TEST_CASE("zeta domain") {
  CHECK_THROWS_AS(specfun::zeta(1.0), std::domain_error);
  CHECK_THROWS_AS(specfun::zeta(0.5), std::domain_error);
  CHECK_NOTHROW(specfun::zeta(1.0000001));
}

TEST_CASE("incomplete gamma tails") {
  CHECK(specfun::gamma_q(0.5, 0.0) == 1.0);
  CHECK(specfun::gamma_p(0.5, 0.0) == 0.0);
  CHECK(specfun::gamma_q(2.5, 3.0) == doctest::Approx(0.30621891841327840).epsilon(1e-12));
  CHECK(specfun::gamma_p(2.5, 3.0) == doctest::Approx(0.69378108158672160).epsilon(1e-12));
  CHECK(specfun::gamma_q(2.5, 3.0) + specfun::gamma_p(2.5, 3.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(specfun::gamma_q(1.0, 5.0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(specfun::gamma_q(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(specfun::gamma_q(1.0, -1.0), std::domain_error);
}

TEST_CASE("rate constant for phi = 1/3") {
  const auto rc = rate_constant(make_params(Rational(1, 3)));
  CHECK(rc.phi == Rational(1, 3));
  CHECK(rc.exponent == doctest::Approx(std::log2(3.0)).epsilon(1e-15));
  CHECK(rc.gamma_factor == doctest::Approx(0.8919102696643318206).epsilon(1e-13));
  CHECK(rc.zeta_factor == doctest::Approx(2.3276059295734838368).epsilon(1e-13));
  CHECK(rc.value == doctest::Approx(1.9967049717022728460).epsilon(1e-12));
  CHECK(rc.est_error > 0.0);
  CHECK(rc.est_error < 1e-11);
}

TEST_CASE("rate constant closed form at phi = 1/4") {
  // exponent 2, Gamma(2) = 1, zeta(2) = pi^2/6, so C = pi^2 / (4 log 2)
  const auto rc = rate_constant(make_params(Rational(1, 4)));
  const double expected =
      std::numbers::pi * std::numbers::pi / (4.0 * std::numbers::ln2);
  CHECK(rc.exponent == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rc.gamma_factor == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rc.value == doctest::Approx(expected).epsilon(1e-12));
}

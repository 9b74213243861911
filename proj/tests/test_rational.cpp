#include <doctest.h>

#include "crgg/rational.hpp"

#include <stdexcept>

using crgg::BigInt;
using crgg::Rational;

TEST_CASE("BigInt arithmetic and conversions") {
  BigInt a(7);
  BigInt b(-3);
  CHECK((a + b) == BigInt(4));
  CHECK((a - b) == BigInt(10));
  CHECK((a * b) == BigInt(-21));
  CHECK(a.to_double() == 7.0);
  CHECK(a.str() == "7");
  CHECK(BigInt("123456789012345678901234567890").str() ==
        "123456789012345678901234567890");

  BigInt c(1);
  c += BigInt(41);
  c *= BigInt(2);
  CHECK(c == BigInt(84));
  CHECK(b < a);
  CHECK_FALSE(a < b);
}

TEST_CASE("BigInt binomial and pow") {
  CHECK(BigInt::binomial(12, 6) == BigInt(924));
  CHECK(BigInt::binomial(5, 0) == BigInt(1));
  CHECK(BigInt::binomial(5, 5) == BigInt(1));
  CHECK(BigInt::pow(BigInt(3), 20) == BigInt(3486784401L));
  CHECK(BigInt::pow(BigInt(2), 64).str() == "18446744073709551616");

  // binomial rows sum to 2^n
  BigInt row_sum(0);
  for (unsigned k = 0; k <= 12; ++k) row_sum += BigInt::binomial(12, k);
  CHECK(row_sum == BigInt::pow(BigInt(2), 12));
}

TEST_CASE("Rational canonical form") {
  CHECK(Rational(2, 6) == Rational(1, 3));
  CHECK(Rational(2, 6).num() == BigInt(1));
  CHECK(Rational(2, 6).den() == BigInt(3));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, -3).str() == "-1/3");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(0, 5).sign() == 0);
  CHECK(Rational(-1, 3).sign() == -1);
  CHECK(Rational(1, 3).sign() == 1);
}

TEST_CASE("Rational string parsing") {
  CHECK(Rational("1/3") == Rational(1, 3));
  CHECK(Rational("2/6") == Rational(1, 3));
  CHECK(Rational("7") == Rational(7, 1));
  CHECK(Rational("-5/10") == Rational(-1, 2));
  CHECK_THROWS_AS(Rational("0.333"), std::invalid_argument);
  CHECK_THROWS_AS(Rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational("abc"), std::invalid_argument);
}

TEST_CASE("Rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) / Rational(2, 9) == Rational(3, 2));
  CHECK(Rational(2, 3).pow(5) == Rational(32, 243));
  CHECK(Rational(2, 3).pow(0) == Rational(1, 1));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 2) <= Rational(1, 2));
  CHECK(Rational(2, 3) > Rational(1, 3));

  // iterate a contraction exactly: x -> x/3 + 1/2, fixed point 3/4
  Rational x(0, 1);
  for (int i = 0; i < 40; ++i) x = x / Rational(3, 1) + Rational(1, 2);
  Rational err = x - Rational(3, 4);
  if (err.sign() < 0) err = Rational(0, 1) - err;
  CHECK(err < Rational(BigInt(1), BigInt::pow(BigInt(3), 39)));
}

TEST_CASE("Rational double conversions") {
  CHECK(Rational::from_double(0.5) == Rational(1, 2));
  CHECK(Rational::from_double(0.1) != Rational(1, 10));
  CHECK(Rational::from_double(0.1) ==
        Rational(BigInt("3602879701896397"), BigInt::pow(BigInt(2), 55)));
  CHECK(Rational(1, 2).to_double() == 0.5);
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  // round trip for dyadic rationals is exact
  Rational d(2897, 4096);
  CHECK(Rational::from_double(d.to_double()) == d);
}

#include <doctest.h>

#include "crgg/cantor_model.hpp"
#include "crgg/rng.hpp"
#include "crgg/sampler.hpp"
#include "crgg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace crgg;

TEST_CASE("point_from_bits reproduces series digits exactly") {
  const auto p = make_params(Rational(1, 3));
  REQUIRE(p.depth == 34);

  const std::uint64_t zero[1] = {0};
  CHECK(point_from_bits(p, zero) == 0.0);

  const double one_minus_phi = 1.0 - p.phi.to_double();
  const std::uint64_t first[1] = {1};
  CHECK(point_from_bits(p, first) == one_minus_phi);

  const std::uint64_t all[1] = {~std::uint64_t{0}};
  // 1 - 3^-34 is within half an ulp of 1, so the Horner evaluation may round
  // to the closed endpoint
  const double top = point_from_bits(p, all);
  CHECK(top == doctest::Approx(1.0 - std::pow(1.0 / 3.0, 34)).epsilon(1e-14));
  CHECK(top <= 1.0);
  CHECK(top >= 1.0 - 3e-16);

  const std::uint64_t short_buf[1] = {0};
  const auto deep = make_params(Rational(1, 3), 100);
  CHECK_THROWS_AS(point_from_bits(deep, std::span(short_buf, 0)), std::invalid_argument);
}

TEST_CASE("point_from_bits handles multi-word depth") {
  const auto deep = make_params(Rational(1, 3), 100);
  std::uint64_t words[2] = {0, 1};  // only series digit 65 set
  const double x = point_from_bits(deep, words);
  const double phi = deep.phi.to_double();
  CHECK(x == doctest::Approx((1.0 - phi) * std::pow(phi, 64)).epsilon(1e-13));
  words[0] = 1;
  words[1] = 0;
  CHECK(point_from_bits(deep, words) == 1.0 - phi);
}

TEST_CASE("SamplerCore matches point_from_bits through the counter stream") {
  const auto p = make_params(Rational(1, 3));
  const std::uint64_t seed = 77, rep = 4;
  const SamplerCore core(p, seed, rep);
  const std::uint64_t base = rng::derive(seed, rep);
  for (std::uint64_t i : {std::uint64_t{0}, std::uint64_t{5}, std::uint64_t{1000}}) {
    const std::uint64_t words[1] = {rng::at(base, i)};
    CHECK(core.point(i) == point_from_bits(p, words));
  }
}

TEST_CASE("sample_batch is deterministic and stream-keyed") {
  const auto p = make_params(Rational(1, 3));
  const auto a = sample_batch(p, 50, 9, 3);
  const auto b = sample_batch(p, 50, 9, 3);
  CHECK(a.points == b.points);

  const auto c = sample_batch(p, 50, 9, 4);
  CHECK(a.points != c.points);
  const auto d = sample_batch(p, 50, 10, 3);
  CHECK(a.points != d.points);

  // prefix property: a shorter batch is a prefix of a longer one
  const auto e = sample_batch(p, 10, 9, 3);
  CHECK(std::equal(e.points.begin(), e.points.end(), a.points.begin()));

  CHECK_THROWS_AS(sample_batch(p, 0, 9, 3), std::domain_error);
}

TEST_CASE("sampled points live in the Cantor support") {
  const auto p = make_params(Rational(1, 3));
  const double phi = p.phi.to_double();
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const auto batch = sample_batch(p, 100, 1234, rep);
    const auto s = split_stats(batch);  // throws if any point hits a deleted gap
    CHECK(s.occupancy.size() == 8);
    std::uint64_t total = 0;
    for (auto c : s.occupancy) total += c;
    CHECK(total == 100);
    CHECK(s.minimum >= 0.0);
    CHECK(s.maximum < 1.0);
    if (s.l_max) CHECK(*s.l_max <= phi + 1e-13);
    if (s.u_min) CHECK(*s.u_min >= 1.0 - phi - 1e-13);
    CHECK(s.n_lower <= 100);
  }
}

TEST_CASE("split_stats classifies the level-3 example batch") {
  const auto p = make_params(Rational(1, 3));
  REQUIRE(p.occupancy_depth == 3);
  SampleBatch batch{p, 0, 0, {0.0, 2.0 / 3.0, 8.0 / 9.0, 2.0 / 9.0}};
  const auto s = split_stats(batch);
  CHECK(s.n_lower == 2);
  CHECK(s.minimum == 0.0);
  CHECK(s.maximum == 8.0 / 9.0);
  REQUIRE(s.l_max.has_value());
  REQUIRE(s.u_min.has_value());
  CHECK(*s.l_max == 2.0 / 9.0);
  CHECK(*s.u_min == 2.0 / 3.0);
  REQUIRE(s.occupancy.size() == 8);
  CHECK(s.occupancy[0] == 1);
  CHECK(s.occupancy[2] == 1);
  CHECK(s.occupancy[4] == 1);
  CHECK(s.occupancy[6] == 1);
  CHECK(s.occupancy[1] + s.occupancy[3] + s.occupancy[5] + s.occupancy[7] == 0);
  CHECK_FALSE(s.all_occupied);
}

TEST_CASE("split_stats rejects gap points and junk") {
  const auto p = make_params(Rational(1, 3));
  const double pts_gap[] = {0.5};
  CHECK_THROWS_AS(split_stats(std::span(pts_gap), 1.0 / 3.0, 3), std::logic_error);
  const double pts_deep_gap[] = {0.15};  // level-2 gap
  CHECK_THROWS_AS(split_stats(std::span(pts_deep_gap), 1.0 / 3.0, 3), std::logic_error);
  const double pts_out[] = {1.5};
  CHECK_THROWS_AS(split_stats(std::span(pts_out), 1.0 / 3.0, 3), std::domain_error);
  const double pts_nan[] = {std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(split_stats(std::span(pts_nan), 1.0 / 3.0, 3), std::domain_error);
  const std::vector<double> empty;
  CHECK_THROWS_AS(split_stats(std::span(empty), 1.0 / 3.0, 3), std::domain_error);
  const double fine[] = {0.1};
  CHECK_THROWS_AS(split_stats(std::span(fine), 1.0 / 3.0, 0), std::runtime_error);
  CHECK_THROWS_AS(split_stats(std::span(fine), 1.0 / 3.0, 27), std::runtime_error);
}

TEST_CASE("empirical law matches the Cantor CDF") {
  const auto p = make_params(Rational(1, 3));
  auto batch = sample_batch(p, 2000, 42, 0);
  std::sort(batch.points.begin(), batch.points.end());

  const auto ks =
      stats::ks_statistic(batch.points, [&](double t) { return cantor_cdf(p, t).value; });
  CHECK(ks < stats::dkw_epsilon(batch.points.size(), 1e-3));

  const auto ms = stats::mean_stderr(batch.points);
  // the law is symmetric about 1/2 with variance (1-phi)/(4(1+phi)) = 1/8
  CHECK(ms.mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::fabs(ms.mean - 0.5) < 4.5 * ms.se);
}

TEST_CASE("left-cell points rescale to the same law") {
  const auto p = make_params(Rational(1, 3));
  const double phi = p.phi.to_double();
  const auto batch = sample_batch(p, 4000, 7, 1);
  std::vector<double> rescaled;
  for (double x : batch.points) {
    if (x <= phi) rescaled.push_back(x / phi);
  }
  REQUIRE(rescaled.size() > 1500);
  std::sort(rescaled.begin(), rescaled.end());
  const auto ks =
      stats::ks_statistic(rescaled, [&](double t) { return cantor_cdf(p, t).value; });
  CHECK(ks < stats::dkw_epsilon(rescaled.size(), 1e-3));
}

TEST_CASE("occupancy counts are near-uniform over level-3 cells") {
  const auto p = make_params(Rational(1, 3));
  const auto batch = sample_batch(p, 4000, 11, 0);
  const auto s = split_stats(batch);
  for (auto c : s.occupancy) {
    CHECK(c > 380);
    CHECK(c < 620);
  }
  CHECK(s.all_occupied);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sist/analytic.hpp"
#include "sist/errors.hpp"
#include "sist/oracles.hpp"

using namespace sist;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("symmetric partition gives a doubly degenerate ladder") {
  const Spectrum s = interval_partition_spectrum(10.0, 5.0, 4);
  REQUIRE(s.size() == 4);
  CHECK(s.k[0] == doctest::Approx(kPi / 5));
  CHECK(s.k[1] == doctest::Approx(kPi / 5));
  CHECK(s.k[2] == doctest::Approx(2 * kPi / 5));
  CHECK(s.k[3] == doctest::Approx(2 * kPi / 5));
  CHECK(s.method == SpectrumMethod::Analytic);
  for (double e : s.error) CHECK(e == 0.0);
}

TEST_CASE("final 1D configuration l = L/5.26") {
  const Spectrum s = interval_partition_spectrum(10.0, 10.0 / 5.26, 2);
  CHECK(s.k[0] == doctest::Approx(kPi / (10.0 - 10.0 / 5.26)));
  CHECK(s.k[1] == doctest::Approx(2 * kPi / (10.0 - 10.0 / 5.26)));
  CHECK(s.k[0] == doctest::Approx(0.3879).epsilon(1e-3));
  CHECK(s.k[1] == doctest::Approx(0.7759).epsilon(1e-3));
}

TEST_CASE("ground level is the longer compartment's") {
  CHECK(interval_partition_spectrum(10.0, 7.0, 1).k[0] == doctest::Approx(kPi / 7));
  CHECK(interval_partition_spectrum(10.0, 3.0, 1).k[0] == doctest::Approx(kPi / 7));
}

TEST_CASE("partitioned interval equals the merged compartment ladders") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> Ld(0.5, 50.0), f(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double L = Ld(rng), l = f(rng) * L;
    const Spectrum s = interval_partition_spectrum(L, l, 64);
    const std::vector<double> ref = oracle::interval_union_bruteforce(L, l, 64);
    for (std::size_t i = 0; i < 64; ++i) REQUIRE(s.k[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  }
}

TEST_CASE("interval ground level does not increase as the longer compartment grows") {
  double prev = 1e9;
  for (int i = 0; i <= 100; ++i) {
    const double l = 5.0 + 4.9 * i / 100.0;
    const double k1 = interval_partition_spectrum(10.0, l, 1).k[0];
    CHECK(k1 <= prev);
    prev = k1;
  }
}

TEST_CASE("rectangle closed form") {
  CHECK(rectangle_spectrum(1.0, 1.0, 1).k[0] == doctest::Approx(kPi * std::sqrt(2.0)));
  CHECK(rectangle_spectrum(1.0, 2.0, 1).k[0] == doctest::Approx(kPi * std::sqrt(4.25)));
  CHECK(rectangle_spectrum(1.0, 2.0, 1).k[0] == doctest::Approx(6.476).epsilon(1e-3));
}

TEST_CASE("rectangle spectrum equals enumeration and is symmetric under b -> a^2/b") {
  for (double b : {0.5, 0.8, 1.0, 1.3, 2.0}) {
    const Spectrum s = rectangle_spectrum(1.2, b, 150);
    const std::vector<double> ref = oracle::rectangle_bruteforce(1.44 / b, b, 150);
    const Spectrum t = rectangle_spectrum(1.2, 1.44 / b, 150);
    for (std::size_t i = 0; i < 150; ++i) {
      REQUIRE(s.k[i] == doctest::Approx(ref[i]).epsilon(1e-14));
      REQUIRE(s.k[i] == doctest::Approx(t.k[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("analytic dispatch") {
  CHECK(has_analytic_spectrum(Interval1D{}));
  CHECK(has_analytic_spectrum(Rectangle{}));
  CHECK_FALSE(has_analytic_spectrum(NestedDisks{}));
  CHECK_FALSE(has_analytic_spectrum(NestedSquares{}));
  CHECK_THROWS_AS(analytic_spectrum(NestedDisks{}, 3), ValidationError);
  CHECK_THROWS_AS(interval_partition_spectrum(10.0, 5.0, 0), ValidationError);
  CHECK_THROWS_AS(interval_partition_spectrum(10.0, 12.0, 3), ValidationError);
  CHECK(analytic_spectrum(Interval1D{10.0, 5.0}, 3).k[2] == doctest::Approx(2 * kPi / 5));
}

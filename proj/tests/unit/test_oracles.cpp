#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sist/oracles.hpp"

using namespace sist;

TEST_CASE("first J_0 zero") { CHECK(oracle::bessel_j0_first_zero() == doctest::Approx(2.404825557695773).epsilon(1e-12)); }

TEST_CASE("rectangle counting by enumeration") {
  // pi * sqrt(i^2 + j^2) < 10: (1,1) (1,2) (2,1) (2,2) (1,3) (3,1).
  CHECK(oracle::rectangle_count_below(1.0, 1.0, 10.0) == 6);
}

TEST_CASE("Spearman correlation") {
  CHECK(oracle::spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(oracle::spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(oracle::spearman({1, 2, 3, 4, 5}, {1, 4, 9, 16, 25}) == doctest::Approx(1.0));
  // ties get average ranks: x ranks (1, 2.5, 2.5, 4)
  CHECK(oracle::spearman({1, 2, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(0.9486832980505138));
}

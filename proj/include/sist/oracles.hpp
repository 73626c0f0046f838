#pragma once

#include <cstddef>
#include <vector>

// Independent reference computations used by the test suites and by the
// `validate` subcommand. Nothing here calls into the solvers it checks.
namespace sist::oracle {

/// First positive zero of J_0 by bisection on its power series.
double bessel_j0_first_zero();

/// Both compartment ladders generated in full, concatenated and sorted.
std::vector<double> interval_union_bruteforce(double L, double l, std::size_t M);

/// Rectangle of sides wx, wy: every (i1, i2) in [1, M]^2 evaluated and sorted.
std::vector<double> rectangle_bruteforce(double wx, double wy, std::size_t M);

/// Number of rectangle modes with k strictly below lambda, by enumeration.
std::size_t rectangle_count_below(double wx, double wy, double lambda);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sist::oracle

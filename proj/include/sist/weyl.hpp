#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sist/geometry.hpp"
#include "sist/spectrum.hpp"

namespace sist {

/// W_D(lambda) = sum_n c_n lambda^n, assembled from the size parameters.
struct WeylPolynomial {
  int dimension = 2;
  std::array<double, 4> coeff{};  // c_0 .. c_3

  static WeylPolynomial from_sizes(const SizeParameters& sizes, int dimension);

  double operator()(double lambda) const;
  double derivative(double lambda) const;
};

/// Weyl estimate of the number of levels below lambda.
/// Throws ValidationError for lambda < 0 or D outside {1, 2, 3}.
double weyl_count(double lambda, const SizeParameters& sizes, int dimension);

/// The lambda >= 0 at which W_D(lambda) = i on its increasing branch.
double weyl_level(int i, const SizeParameters& sizes, int dimension);

/// Number of levels strictly below lambda.
std::size_t level_count(const Spectrum& spec, double lambda);

/// Signed staircase error (i - 1/2) - W(k_i) for i = 1..n: the staircase is read
/// at the midpoint of its jump, so a level sitting on W gives zero.
std::vector<double> weyl_signed_error(const Spectrum& spec, const SizeParameters& sizes, int dimension);

}  // namespace sist

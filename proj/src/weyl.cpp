#include "sist/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sist/errors.hpp"

namespace sist {

namespace {
constexpr double kPi = std::numbers::pi;

void check_dimension(int d) {
  if (d < 1 || d > 3) throw ValidationError("Weyl law supports dimensions 1, 2 and 3 only");
}
}  // namespace

WeylPolynomial WeylPolynomial::from_sizes(const SizeParameters& z, int dimension) {
  check_dimension(dimension);
  WeylPolynomial w;
  w.dimension = dimension;
  switch (dimension) {
    case 1:
      w.coeff = {-z.vertices / 4.0, z.perimeter / kPi, 0.0, 0.0};
      break;
    case 2:
      w.coeff = {z.vertices / 16.0, -z.perimeter / (4.0 * kPi), z.area / (4.0 * kPi), 0.0};
      break;
    default:
      w.coeff = {-z.vertices / 64.0, z.perimeter / (16.0 * kPi), -z.area / (16.0 * kPi),
                 z.volume / (6.0 * kPi * kPi)};
      break;
  }
  if (!(w.coeff[static_cast<std::size_t>(dimension)] > 0.0))
    throw ValidationError("Weyl polynomial needs a positive leading size parameter");
  return w;
}

double WeylPolynomial::operator()(double x) const {
  return ((coeff[3] * x + coeff[2]) * x + coeff[1]) * x + coeff[0];
}

double WeylPolynomial::derivative(double x) const {
  return (3.0 * coeff[3] * x + 2.0 * coeff[2]) * x + coeff[1];
}

double weyl_count(double lambda, const SizeParameters& sizes, int dimension) {
  if (!(lambda >= 0.0)) throw ValidationError("Weyl count needs lambda >= 0");
  return WeylPolynomial::from_sizes(sizes, dimension)(lambda);
}

double weyl_level(int i, const SizeParameters& sizes, int dimension) {
  if (i < 1) throw ValidationError("level index must be >= 1");
  const WeylPolynomial w = WeylPolynomial::from_sizes(sizes, dimension);
  const double target = static_cast<double>(i);
  const auto& c = w.coeff;

  double root = -1.0;
  if (dimension == 1) {
    root = (target - c[0]) / c[1];
  } else if (dimension == 2) {
    // c2 x^2 + c1 x + (c0 - i) = 0, larger root
    const double disc = c[1] * c[1] - 4.0 * c[2] * (c[0] - target);
    if (disc >= 0.0) root = (-c[1] + std::sqrt(disc)) / (2.0 * c[2]);
  } else {
    // Newton from above the largest critical point; W is increasing and
    // convex there, so the iteration descends monotonically onto the root.
    double x = std::cbrt(std::max(target, 1.0) / c[3]) + std::abs(c[2] / c[3]) + std::abs(c[1] / c[2]);
    while (w(x) < target) x *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double step = (w(x) - target) / w.derivative(x);
      x -= step;
      if (std::abs(step) <= 1e-15 * x) break;
    }
    root = x;
  }
  if (!(root >= 0.0)) throw ValidationError("Weyl polynomial has no nonnegative root for this level");
  return root;
}

std::size_t level_count(const Spectrum& spec, double lambda) {
  return static_cast<std::size_t>(std::lower_bound(spec.k.begin(), spec.k.end(), lambda) - spec.k.begin());
}

std::vector<double> weyl_signed_error(const Spectrum& spec, const SizeParameters& sizes, int dimension) {
  const WeylPolynomial w = WeylPolynomial::from_sizes(sizes, dimension);
  std::vector<double> out(spec.k.size());
  for (std::size_t i = 0; i < spec.k.size(); ++i) out[i] = static_cast<double>(i) + 0.5 - w(spec.k[i]);
  return out;
}

}  // namespace sist

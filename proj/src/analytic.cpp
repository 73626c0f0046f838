#include "sist/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sist/errors.hpp"

namespace sist {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view method_name(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::Analytic:
      return "analytic";
    case SpectrumMethod::Grid:
      return "grid";
    case SpectrumMethod::Explicit:
      return "explicit";
  }
  return "unknown";
}

Spectrum explicit_spectrum(std::vector<double> k) {
  std::sort(k.begin(), k.end());
  Spectrum s;
  s.error.assign(k.size(), 0.0);
  s.k = std::move(k);
  s.method = SpectrumMethod::Explicit;
  return s;
}

Spectrum interval_partition_spectrum(double L, double l, int M) {
  validate(Interval1D{L, l});
  if (M < 1) throw ValidationError("requested level count M must be >= 1");

  Spectrum out;
  out.k.reserve(static_cast<std::size_t>(M));
  const double left = kPi / l;
  const double right = kPi / (L - l);
  long i = 1;
  long j = 1;
  while (static_cast<int>(out.k.size()) < M) {
    const double a = static_cast<double>(i) * left;
    const double b = static_cast<double>(j) * right;
    if (a <= b) {
      out.k.push_back(a);
      ++i;
    } else {
      out.k.push_back(b);
      ++j;
    }
  }
  out.error.assign(out.k.size(), 0.0);
  out.method = SpectrumMethod::Analytic;
  out.shape = Interval1D{L, l};
  return out;
}

Spectrum rectangle_spectrum(double a, double b, int M) {
  validate(Rectangle{a, b});
  if (M < 1) throw ValidationError("requested level count M must be >= 1");

  const double wx = a * a / b;
  const double wy = b;
  // Leading Weyl term as a first guess for the cutoff.
  double k_max = std::sqrt(4.0 * kPi * (M + 1.0) / (a * a)) + kPi / std::min(wx, wy);
  std::vector<double> found;
  for (;;) {
    found.clear();
    const long n1 = static_cast<long>(std::ceil(k_max * wx / kPi));
    const long n2 = static_cast<long>(std::ceil(k_max * wy / kPi));
    for (long i1 = 1; i1 <= n1; ++i1) {
      const double kx = kPi * static_cast<double>(i1) / wx;
      if (kx > k_max) break;
      for (long i2 = 1; i2 <= n2; ++i2) {
        const double k = std::hypot(kx, kPi * static_cast<double>(i2) / wy);
        if (k > k_max) break;
        found.push_back(k);
      }
    }
    // Every value <= k_max is present, so the M smallest are final.
    if (static_cast<int>(found.size()) >= M) break;
    k_max *= 1.5;
  }
  std::sort(found.begin(), found.end());
  found.resize(static_cast<std::size_t>(M));

  Spectrum out;
  out.k = std::move(found);
  out.error.assign(out.k.size(), 0.0);
  out.method = SpectrumMethod::Analytic;
  out.shape = Rectangle{a, b};
  return out;
}

bool has_analytic_spectrum(const ShapeConfig& shape) {
  const Family f = family_of(shape);
  return f == Family::Interval1D || f == Family::Rectangle;
}

Spectrum analytic_spectrum(const ShapeConfig& shape, int M) {
  if (const auto* s = std::get_if<Interval1D>(&shape)) return interval_partition_spectrum(s->L, s->l, M);
  if (const auto* s = std::get_if<Rectangle>(&shape)) return rectangle_spectrum(s->a, s->b, M);
  throw ValidationError("no closed-form spectrum for family " + std::string(family_name(family_of(shape))));
}

}  // namespace sist

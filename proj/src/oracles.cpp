#include "sist/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sist::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double j0_series(double x) {
  const double q = -(x * x) / 4.0;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 80; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double bessel_j0_first_zero() {
  double lo = 2.0;
  double hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((j0_series(lo) > 0.0) == (j0_series(mid) > 0.0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> interval_union_bruteforce(double L, double l, std::size_t M) {
  std::vector<double> all;
  for (std::size_t i = 1; i <= M; ++i) {
    all.push_back(kPi * static_cast<double>(i) / l);
    all.push_back(kPi * static_cast<double>(i) / (L - l));
  }
  std::sort(all.begin(), all.end());
  all.resize(M);
  return all;
}

std::vector<double> rectangle_bruteforce(double wx, double wy, std::size_t M) {
  std::vector<double> all;
  all.reserve(M * M);
  for (std::size_t i = 1; i <= M; ++i)
    for (std::size_t j = 1; j <= M; ++j)
      all.push_back(kPi * std::sqrt(std::pow(static_cast<double>(i) / wx, 2) + std::pow(static_cast<double>(j) / wy, 2)));
  std::sort(all.begin(), all.end());
  all.resize(M);
  return all;
}

std::size_t rectangle_count_below(double wx, double wy, double lambda) {
  std::size_t n = 0;
  for (long i = 1; kPi * static_cast<double>(i) / wx < lambda; ++i)
    for (long j = 1;; ++j) {
      const double k = kPi * std::sqrt(std::pow(static_cast<double>(i) / wx, 2) + std::pow(static_cast<double>(j) / wy, 2));
      if (!(k < lambda)) break;
      ++n;
    }
  return n;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("spearman needs two equal-length series");
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace sist::oracle

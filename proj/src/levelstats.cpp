#include "sist/levelstats.hpp"

#include <algorithm>
#include <cmath>

#include "sist/errors.hpp"

namespace sist {

namespace {

DistinctLevels cluster(const std::vector<double>& k, const std::vector<int>& weight, double rel_tol) {
  DistinctLevels out;
  out.rel_tol = rel_tol;
  std::size_t i = 0;
  while (i < k.size()) {
    double sum = k[i] * weight[i];
    int m = weight[i];
    std::size_t j = i + 1;
    while (j < k.size() && (k[j] - k[j - 1]) < rel_tol * std::abs(k[j])) {
      sum += k[j] * weight[j];
      m += weight[j];
      ++j;
    }
    out.k.push_back(sum / m);
    out.multiplicity.push_back(m);
    i = j;
  }
  return out;
}

}  // namespace

std::size_t DistinctLevels::degenerate_groups(std::size_t n) const {
  const std::size_t end = std::min(n, multiplicity.size());
  return static_cast<std::size_t>(
      std::count_if(multiplicity.begin(), multiplicity.begin() + static_cast<long>(end), [](int m) { return m >= 2; }));
}

DistinctLevels distinct_levels(const Spectrum& spec, double rel_tol) {
  return cluster(spec.k, std::vector<int>(spec.k.size(), 1), rel_tol);
}

DistinctLevels distinct_levels(const Spectrum& spec) { return distinct_levels(spec, spec.degeneracy_tol); }

DistinctLevels distinct_levels(const DistinctLevels& levels, double rel_tol) {
  return cluster(levels.k, levels.multiplicity, rel_tol);
}

double mean_spacing(const DistinctLevels& levels, std::size_t N) {
  if (N < 1) throw ValidationError("mean spacing needs N >= 1");
  if (levels.size() < N + 1)
    throw InsufficientLevelsError("mean spacing over " + std::to_string(N) + " gaps needs " + std::to_string(N + 1) +
                                  " distinct levels, have " + std::to_string(levels.size()));
  return (levels.k[N] - levels.k[0]) / static_cast<double>(N);
}

std::vector<double> mean_spacing_series(const DistinctLevels& levels) {
  std::vector<double> out;
  for (std::size_t n = 1; n < levels.size(); ++n) out.push_back(mean_spacing(levels, n));
  return out;
}

Histogram spacing_histogram(const DistinctLevels& levels, std::size_t bins) {
  if (levels.size() < 2) throw InsufficientLevelsError("spacing histogram needs at least two levels");
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  std::vector<double> gaps(levels.size() - 1);
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) gaps[i] = levels.k[i + 1] - levels.k[i];
  const double top = *std::max_element(gaps.begin(), gaps.end());

  Histogram hist;
  hist.counts.assign(bins, 0);
  hist.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) hist.edges[b] = top * static_cast<double>(b) / static_cast<double>(bins);
  for (double g : gaps) {
    auto b = top > 0.0 ? static_cast<std::size_t>(g / top * static_cast<double>(bins)) : 0;
    hist.counts[std::min(b, bins - 1)] += 1;
  }
  return hist;
}

}  // namespace sist

#pragma once

#include <cstddef>
#include <vector>

#include "sist/spectrum.hpp"

namespace sist {

/// Spectrum with degeneracies collapsed.
struct DistinctLevels {
  std::vector<double> k;
  std::vector<int> multiplicity;
  double rel_tol = 0.0;

  std::size_t size() const { return k.size(); }
  /// Number of groups with multiplicity >= 2 among the first `n` levels.
  std::size_t degenerate_groups(std::size_t n) const;
};

/// Greedy clustering of a sorted spectrum: a level joins the current cluster
/// when its gap to the previous level is below rel_tol times that level.
/// Cluster value is the mean of its members.
DistinctLevels distinct_levels(const Spectrum& spec, double rel_tol);
DistinctLevels distinct_levels(const Spectrum& spec);  // uses spec.degeneracy_tol
DistinctLevels distinct_levels(const DistinctLevels& levels, double rel_tol);

/// Mean of the first N consecutive gaps, (k'_{N+1} - k'_1) / N. Throws
/// ValidationError for N = 0 and InsufficientLevelsError below N + 1 levels.
double mean_spacing(const DistinctLevels& levels, std::size_t N);

/// Mean spacing for N = 1 .. size()-1.
std::vector<double> mean_spacing_series(const DistinctLevels& levels);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

/// Consecutive gaps binned uniformly over [0, max gap].
Histogram spacing_histogram(const DistinctLevels& levels, std::size_t bins);

}  // namespace sist

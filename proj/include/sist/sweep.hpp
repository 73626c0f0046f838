#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sist/eigensolver.hpp"
#include "sist/geometry.hpp"
#include "sist/spectrum.hpp"
#include "sist/thermo.hpp"

namespace sist {

struct SweepConfig {
  /// Family and fixed parameters; the shape variable is overwritten per point.
  ShapeConfig base;
  double gamma_from = 0.0;
  double gamma_to = 0.0;
  std::size_t steps = 2;
  std::size_t M = 4;
  std::vector<double> T;
  /// Ceiling for the spectrum length when thermodynamics needs more than M levels.
  std::size_t max_levels = 2048;
  /// Grid spacing for families without a closed form.
  double h = 0.01;
  /// Solve at h and h/2 and attach Richardson estimates; otherwise one solve at h.
  bool richardson = true;
  /// Use the grid solver even where a closed form exists.
  bool force_grid = false;
  bool measures = false;
  RefinementOptions refinement;
  TruncationPolicy policy;
  /// Worker threads for the per-point evaluations; 0 uses the hardware count.
  unsigned threads = 1;
  /// Avoided-crossing threshold as a fraction of the local mean spacing.
  double gap_threshold = 0.01;
};

struct SweepPoint {
  double gamma = 0.0;
  ShapeConfig shape;
  Spectrum spectrum;                 ///< at least M levels, more when thermodynamics needed them
  std::vector<ThermoState> thermo;  ///< one per entry of SweepConfig::T
  std::optional<double> r_in;
  std::optional<double> d_H;        ///< nested squares only (quadrant vs. equal-area disk)
};

enum class EventKind { Crossing, AvoidedCrossing, AmbiguousPairing };

std::string_view event_name(EventKind kind);

struct LevelEvent {
  EventKind kind = EventKind::Crossing;
  double gamma = 0.0;  ///< interpolated crossing point, or the sample at the gap minimum
  double gap = 0.0;    ///< smallest sampled gap between the two levels nearby
  int level_a = 0;     ///< 1-based sorted level indices, level_a < level_b
  int level_b = 0;
};

struct Tracking {
  /// trajectories[i][g]: level i (sorted order) at grid point g.
  std::vector<std::vector<double>> trajectories;
  std::vector<LevelEvent> events;
};

struct SweepResult {
  SweepConfig config;
  std::vector<double> gamma;  ///< strictly increasing
  std::vector<SweepPoint> points;
  Tracking tracking;

  /// Series of one quantity across the sweep.
  std::vector<double> level_series(std::size_t level) const;
  std::vector<double> thermo_series(std::size_t t_index, double ThermoState::*field) const;
  std::vector<double> probability_series(std::size_t t_index, std::size_t level) const;
};

/// One point of a sweep: spectrum (lengthened until every temperature's
/// truncation policy holds), thermodynamics and optional measures.
SweepPoint evaluate_point(const SweepConfig& config, double gamma);

/// Evaluates spectra, thermodynamics and (optionally) measures on an evenly
/// spaced grid between the endpoints, then tracks levels. A descending range
/// is evaluated on the same points in increasing order. Solver failures are
/// rethrown with the offending gamma in the message.
SweepResult run_sweep(const SweepConfig& config);

/// Sorted-order trajectories plus events from per-point spectra. `tie_tol`
/// is the relative gap below which predicted levels count as tied.
Tracking track_levels(std::span<const double> gamma, std::span<const std::vector<double>> levels, double gap_threshold,
                      double tie_tol);
Tracking track_levels(const SweepResult& sr);

/// Per-level entropy contributions -p_i ln p_i.
std::vector<double> entropy_decomposition(const ThermoState& state);

/// Derivative on a nonuniform grid: central differences inside, one-sided
/// at the ends.
std::vector<double> grid_derivative(std::span<const double> x, std::span<const double> y);

struct AvalancheReport {
  double T = 0.0;
  std::vector<std::pair<double, double>> intervals;  ///< maximal runs of grid points
  double argmax_p1 = 0.0;
  bool interior_p1_max = false;
  double argmin_S = 0.0;
  bool interior_S_min = false;
  std::vector<double> dp1, dS, dlnZ;
};

/// Intervals where dp1 > 0, dS < 0 and dZ > 0 (via ln Z) hold together.
/// Slopes whose magnitude is below `noise` times the quantity's scale
/// count as zero. Throws InsufficientLevelsError for fewer than 5 points.
AvalancheReport detect_avalanche(const SweepResult& sr, std::size_t t_index = 0, double noise = 1e-10);

/// Runs the sweep at every temperature in `T_grid` and keeps the one whose
/// entropy minimum is interior and lies latest while not exceeding
/// `gamma_limit`. Returns nothing when no temperature qualifies.
std::optional<AvalancheReport> calibrate_temperature(const SweepConfig& config, std::span<const double> T_grid,
                                                     double gamma_limit);

/// Divides a series by its first entry.
std::vector<double> normalized(std::span<const double> series);

}  // namespace sist

#include "sist/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "sist/analytic.hpp"
#include "sist/errors.hpp"
#include "sist/measures.hpp"

namespace sist {

namespace {

std::string gamma_context(double gamma) {
  std::ostringstream os;
  os.precision(10);
  os << "at gamma = " << gamma << ": ";
  return os.str();
}

// Re-raise with the sweep position prepended, keeping the error type.
[[noreturn]] void rethrow_at(double gamma) {
  const std::string where = gamma_context(gamma);
  try {
    throw;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + e.what(), e.residuals());
  } catch (const RefinementNeededError& e) {
    throw RefinementNeededError(where + e.what());
  } catch (const InsufficientLevelsError& e) {
    throw InsufficientLevelsError(where + e.what());
  } catch (const DegenerateGeometryError& e) {
    throw DegenerateGeometryError(where + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.what());
  }
}

Spectrum spectrum_at(const SweepConfig& cfg, const ShapeConfig& shape, std::size_t m) {
  if (!cfg.force_grid && has_analytic_spectrum(shape)) return analytic_spectrum(shape, static_cast<int>(m));
  if (cfg.richardson) return converged_modes(shape, m, cfg.h, cfg.refinement).spectrum;
  return solve_on_grid(shape, m, cfg.h, cfg.refinement.solver).spectrum;
}

// Representative scale for the noise floor of a derivative.
double series_scale(std::span<const double> y) {
  double s = 0.0;
  for (double v : y) s = std::max(s, std::abs(v));
  return s;
}

int sign_with_floor(double d, double floor) {
  if (d > floor) return 1;
  if (d < -floor) return -1;
  return 0;
}

std::size_t argmax(std::span<const double> y) {
  return static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
}

std::size_t argmin(std::span<const double> y) {
  return static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
}

// Local mean spacing around sorted level a: average gap over up to two
// neighbouring gaps on each side.
double local_spacing(const std::vector<double>& k, std::size_t a) {
  const std::size_t lo = a >= 2 ? a - 2 : 0;
  const std::size_t hi = std::min(k.size() - 1, a + 3);
  if (hi <= lo) return 0.0;
  return (k[hi] - k[lo]) / static_cast<double>(hi - lo);
}

}  // namespace

SweepPoint evaluate_point(const SweepConfig& cfg, double gamma) {
  SweepPoint pt;
  pt.gamma = gamma;
  pt.shape = with_shape_variable(cfg.base, gamma);
  validate(pt.shape);
  // Thermodynamics may need more levels than are tracked; the spectrum is
  // doubled until the truncation policy can be met.
  std::size_t m = cfg.M;
  for (;;) {
    pt.spectrum = spectrum_at(cfg, pt.shape, m);
    pt.thermo.clear();
    try {
      for (double T : cfg.T) pt.thermo.push_back(boltzmann(pt.spectrum, T, 0, cfg.policy));
      break;
    } catch (const RefinementNeededError&) {
      if (m >= cfg.max_levels) throw;
      m = std::min(cfg.max_levels, 2 * m);
    }
  }
  if (cfg.measures) {
    pt.r_in = inscribed_radius(pt.shape);
    if (family_of(pt.shape) == Family::NestedSquares) {
      const DomainMask quad = quadrant_region(pt.shape, cfg.h);
      pt.d_H = hausdorff_distance(quad, equal_area_disk(quad));
    }
  }
  return pt;
}

std::string_view event_name(EventKind kind) {
  switch (kind) {
    case EventKind::Crossing: return "crossing";
    case EventKind::AvoidedCrossing: return "avoided_crossing";
    case EventKind::AmbiguousPairing: return "ambiguous_pairing";
  }
  return "unknown";
}

std::vector<double> SweepResult::level_series(std::size_t level) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.spectrum.k.at(level));
  return out;
}

std::vector<double> SweepResult::thermo_series(std::size_t t_index, double ThermoState::*field) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.thermo.at(t_index).*field);
  return out;
}

std::vector<double> SweepResult::probability_series(std::size_t t_index, std::size_t level) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const auto& prob = p.thermo.at(t_index).p;
    out.push_back(level < prob.size() ? prob[level] : 0.0);
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.steps < 2) throw ValidationError("a sweep needs at least 2 steps");
  if (config.M < 1) throw ValidationError("a sweep needs M >= 1");
  if (config.max_levels < config.M) throw ValidationError("max_levels must be at least M");
  if (!std::isfinite(config.gamma_from) || !std::isfinite(config.gamma_to) || config.gamma_from == config.gamma_to)
    throw ValidationError("sweep endpoints must be finite and distinct");
  for (double T : config.T)
    if (!(T > 0.0)) throw ValidationError("temperatures must be positive");
  if (!(config.gap_threshold > 0.0)) throw ValidationError("gap threshold must be positive");

  SweepResult sr;
  sr.config = config;
  const double lo = std::min(config.gamma_from, config.gamma_to);
  const double hi = std::max(config.gamma_from, config.gamma_to);
  const std::size_t n = config.steps;
  sr.gamma.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sr.gamma[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  // Endpoint validity is checked before any solver work starts.
  validate(with_shape_variable(config.base, lo));
  validate(with_shape_variable(config.base, hi));

  sr.points.resize(n);
  std::vector<std::exception_ptr> errors(n);
  unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        sr.points[i] = evaluate_point(config, sr.gamma[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  // The first failing point in gamma order is reported, whatever the schedule.
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error&) {
      rethrow_at(sr.gamma[i]);
    }
  }

  sr.tracking = track_levels(sr);
  return sr;
}

Tracking track_levels(const SweepResult& sr) {
  std::vector<std::vector<double>> levels;
  levels.reserve(sr.points.size());
  double tie = 0.0;
  for (const auto& p : sr.points) {
    levels.emplace_back(p.spectrum.k.begin(), p.spectrum.k.begin() + static_cast<long>(sr.config.M));
    tie = std::max(tie, p.spectrum.degeneracy_tol);
  }
  return track_levels(sr.gamma, levels, sr.config.gap_threshold, tie);
}

Tracking track_levels(std::span<const double> gamma, std::span<const std::vector<double>> levels, double gap_threshold,
                      double tie_tol) {
  if (gamma.size() != levels.size()) throw ValidationError("one spectrum per sweep point is required");
  Tracking out;
  if (gamma.empty()) return out;
  const std::size_t M = levels.front().size();
  for (const auto& k : levels)
    if (k.size() != M) throw ValidationError("spectra along a sweep must have equal length");
  for (std::size_t g = 1; g < gamma.size(); ++g)
    if (!(gamma[g] > gamma[g - 1])) throw ValidationError("sweep grid must be strictly increasing");

  out.trajectories.assign(M, std::vector<double>(gamma.size()));
  for (std::size_t g = 0; g < gamma.size(); ++g)
    for (std::size_t i = 0; i < M; ++i) out.trajectories[i][g] = levels[g][i];

  // Diabatic continuation: each level's value one step back along its own
  // branch gives the slope used to predict the next point. Predictions are
  // ranked against the next sorted spectrum; a change of order is a crossing.
  std::vector<double> prev(levels.front());
  std::vector<std::pair<std::size_t, std::size_t>> ambiguous_before;
  std::vector<std::pair<std::size_t, std::size_t>> crossed;  // (grid step, lower level)
  for (std::size_t g = 0; g + 1 < gamma.size(); ++g) {
    const std::vector<double>& cur = levels[g];
    const std::vector<double>& nxt = levels[g + 1];
    std::vector<double> pred(M);
    for (std::size_t r = 0; r < M; ++r) {
      const double slope = g == 0 ? 0.0 : (cur[r] - prev[r]) / (gamma[g] - gamma[g - 1]);
      pred[r] = cur[r] + slope * (gamma[g + 1] - gamma[g]);
    }
    std::vector<std::size_t> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pred[a] < pred[b]; });

    // Tied predictions keep their current order; each newly tied pair is a
    // warning since the pairing there is by index only.
    std::vector<std::pair<std::size_t, std::size_t>> ambiguous_now;
    std::size_t start = 0;
    while (start < M) {
      std::size_t end = start + 1;
      while (end < M && pred[order[end]] - pred[order[end - 1]] <= tie_tol * std::abs(pred[order[end]])) ++end;
      std::sort(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end));
      for (std::size_t q = start; q + 1 < end; ++q) {
        const std::pair<std::size_t, std::size_t> pr{order[q], order[q + 1]};
        ambiguous_now.push_back(pr);
        if (std::find(ambiguous_before.begin(), ambiguous_before.end(), pr) == ambiguous_before.end())
          out.events.push_back({EventKind::AmbiguousPairing, gamma[g], std::abs(cur[pr.second] - cur[pr.first]),
                                static_cast<int>(pr.first + 1), static_cast<int>(pr.second + 1)});
      }
      start = end;
    }
    ambiguous_before = std::move(ambiguous_now);

    // order[q] is the branch that lands on sorted position q at g+1.
    std::vector<std::size_t> lands(M);
    for (std::size_t q = 0; q < M; ++q) lands[order[q]] = q;
    for (std::size_t a = 0; a < M; ++a) {
      for (std::size_t b = a + 1; b < M; ++b) {
        if (lands[a] < lands[b]) continue;
        // Branch a (lower now) ends above branch b: interpolate the meeting point.
        const double d0 = cur[b] - cur[a];
        const double d1 = nxt[lands[a]] - nxt[lands[b]];
        const double t = d0 + d1 > 0.0 ? d0 / (d0 + d1) : 0.5;
        out.events.push_back({EventKind::Crossing, gamma[g] + t * (gamma[g + 1] - gamma[g]), std::min(d0, d1), static_cast<int>(a + 1),
                              static_cast<int>(b + 1)});
        if (b == a + 1) crossed.emplace_back(g, a);
      }
    }
    prev.assign(M, 0.0);
    for (std::size_t r = 0; r < M; ++r) prev[lands[r]] = cur[r];
  }

  // Avoided crossings: interior local minima of adjacent sorted gaps that are
  // small against the local spacing but not persistent degeneracies.
  for (std::size_t a = 0; a + 1 < M; ++a) {
    for (std::size_t g = 1; g + 1 < gamma.size(); ++g) {
      auto gap = [&](std::size_t s) { return levels[s][a + 1] - levels[s][a]; };
      const double gm = gap(g);
      if (!(gm < gap(g - 1) && gm <= gap(g + 1))) continue;
      const double spacing = local_spacing(levels[g], a);
      if (!(gm < gap_threshold * spacing)) continue;
      const auto degenerate = [&](std::size_t s) { return gap(s) <= tie_tol * levels[s][a + 1]; };
      if (degenerate(g - 1) || degenerate(g + 1)) continue;
      const bool near_crossing = std::any_of(crossed.begin(), crossed.end(), [&](const auto& c) {
        return c.second == a && (c.first + 1 == g || c.first == g);
      });
      if (near_crossing) continue;
      out.events.push_back({EventKind::AvoidedCrossing, gamma[g], gm, static_cast<int>(a + 1), static_cast<int>(a + 2)});
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const LevelEvent& x, const LevelEvent& y) { return x.gamma < y.gamma; });
  return out;
}

std::vector<double> entropy_decomposition(const ThermoState& state) { return entropy_contributions(state); }

std::vector<double> grid_derivative(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("derivative needs matching x and y");
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientLevelsError("derivative needs at least 2 points");
  std::vector<double> d(n);
  d[0] = (y[1] - y[0]) / (x[1] - x[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // Three-point formula, exact for quadratics on uneven spacing.
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    d[i] = (hl * hl * y[i + 1] - hr * hr * y[i - 1] + (hr * hr - hl * hl) * y[i]) / (hl * hr * (hl + hr));
  }
  return d;
}

AvalancheReport detect_avalanche(const SweepResult& sr, std::size_t t_index, double noise) {
  const std::size_t n = sr.gamma.size();
  if (n < 5) throw InsufficientLevelsError("avalanche detection needs at least 5 sweep points, got " + std::to_string(n));
  if (sr.points.empty() || t_index >= sr.points.front().thermo.size())
    throw ValidationError("sweep carries no thermodynamics at temperature index " + std::to_string(t_index));

  AvalancheReport rep;
  rep.T = sr.points.front().thermo[t_index].T;
  const std::vector<double> p1 = sr.probability_series(t_index, 0);
  const std::vector<double> S = sr.thermo_series(t_index, &ThermoState::S);
  const std::vector<double> lnZ = sr.thermo_series(t_index, &ThermoState::lnZ);
  rep.dp1 = grid_derivative(sr.gamma, p1);
  rep.dS = grid_derivative(sr.gamma, S);
  rep.dlnZ = grid_derivative(sr.gamma, lnZ);

  const double span = sr.gamma.back() - sr.gamma.front();
  const double f_p = noise * series_scale(p1) / span;
  const double f_S = noise * std::max(series_scale(S), 1.0) / span;
  const double f_Z = noise * std::max(series_scale(lnZ), 1.0) / span;

  std::size_t i = 0;
  while (i < n) {
    auto hit = [&](std::size_t j) {
      return sign_with_floor(rep.dp1[j], f_p) > 0 && sign_with_floor(rep.dS[j], f_S) < 0 &&
             sign_with_floor(rep.dlnZ[j], f_Z) > 0;
    };
    if (!hit(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && hit(j + 1)) ++j;
    rep.intervals.emplace_back(sr.gamma[i], sr.gamma[j]);
    i = j + 1;
  }

  const std::size_t ip = argmax(p1);
  rep.argmax_p1 = sr.gamma[ip];
  rep.interior_p1_max = ip > 0 && ip + 1 < n;
  const std::size_t is = argmin(S);
  rep.argmin_S = sr.gamma[is];
  rep.interior_S_min = is > 0 && is + 1 < n;
  return rep;
}

std::optional<AvalancheReport> calibrate_temperature(const SweepConfig& config, std::span<const double> T_grid,
                                                     double gamma_limit) {
  if (T_grid.empty()) throw ValidationError("temperature scan needs at least one temperature");
  SweepConfig cfg = config;
  cfg.T.assign(T_grid.begin(), T_grid.end());
  const SweepResult sr = run_sweep(cfg);
  std::optional<AvalancheReport> best;
  for (std::size_t t = 0; t < T_grid.size(); ++t) {
    AvalancheReport rep = detect_avalanche(sr, t);
    if (!rep.interior_S_min || rep.argmin_S > gamma_limit) continue;
    if (!best || rep.argmin_S > best->argmin_S) best = std::move(rep);
  }
  return best;
}

std::vector<double> normalized(std::span<const double> series) {
  if (series.empty()) return {};
  if (series.front() == 0.0) throw ValidationError("cannot normalise a series that starts at zero");
  std::vector<double> out(series.begin(), series.end());
  for (double& v : out) v /= series.front();
  return out;
}

}  // namespace sist

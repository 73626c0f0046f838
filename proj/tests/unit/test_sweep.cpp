#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sist/analytic.hpp"
#include "sist/errors.hpp"
#include "sist/sweep.hpp"

using namespace sist;

namespace {

constexpr double kPi = std::numbers::pi;

SweepConfig interval_sweep(double from, double to, std::size_t steps, std::vector<double> T = {}) {
  SweepConfig c;
  c.base = Interval1D{10.0, 5.0};
  c.gamma_from = from;
  c.gamma_to = to;
  c.steps = steps;
  c.M = 4;
  c.T = std::move(T);
  return c;
}

std::size_t count_kind(const Tracking& t, EventKind k) {
  return static_cast<std::size_t>(std::count_if(t.events.begin(), t.events.end(), [k](const LevelEvent& e) { return e.kind == k; }));
}

// A sweep whose spectra are one fixed spectrum divided by gamma.
SweepResult dilation_sweep(double T) {
  const Spectrum base = interval_partition_spectrum(10.0, 3.0, 1500);
  SweepResult sr;
  sr.config.M = 4;
  for (int g = 0; g <= 20; ++g) {
    const double a = 1.0 + g / 20.0;
    SweepPoint p;
    p.gamma = a;
    p.spectrum = base;
    for (double& k : p.spectrum.k) k /= a;
    p.thermo.push_back(boltzmann(p.spectrum, T));
    sr.gamma.push_back(a);
    sr.points.push_back(std::move(p));
  }
  sr.tracking = track_levels(sr);
  return sr;
}

}  // namespace

TEST_CASE("endpoint-only sweep") {
  const SweepResult sr = run_sweep(interval_sweep(6.0, 6.5, 2, {1.0}));
  CHECK(sr.gamma == std::vector<double>{6.0, 6.5});
  CHECK(sr.points.size() == 2);
  CHECK(sr.tracking.events.empty());
  CHECK(sr.tracking.trajectories.size() == 4);
}

TEST_CASE("1D sweep follows the closed form and finds the level swaps") {
  const SweepResult sr = run_sweep(interval_sweep(5.0, 9.9, 50));
  REQUIRE(sr.tracking.trajectories.size() == 4);
  for (std::size_t g = 0; g < sr.gamma.size(); ++g) {
    const Spectrum s = interval_partition_spectrum(10.0, sr.gamma[g], 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(sr.tracking.trajectories[i][g] == s.k[i]);
  }
  // Level 2 and 3 trade places where pi*2/(L-l) = pi/l, l = 20/3.
  bool swap23 = false;
  for (const auto& e : sr.tracking.events)
    if (e.kind == EventKind::Crossing && e.level_a == 2 && e.level_b == 3) {
      swap23 = true;
      CHECK(e.gamma > 6.0);
      CHECK(e.gamma < 7.0);
      CHECK(e.gamma == doctest::Approx(20.0 / 3.0).epsilon(1e-3));
    }
  CHECK(swap23);
  // The symmetric start is a tie, reported as a warning.
  CHECK(count_kind(sr.tracking, EventKind::AmbiguousPairing) >= 1);
  CHECK(count_kind(sr.tracking, EventKind::AvoidedCrossing) == 0);
}

TEST_CASE("second trajectory turns around inside the 1D sweep") {
  const SweepResult sr = run_sweep(interval_sweep(5.0, 10.0 - 10.0 / 5.26, 61));
  const std::vector<double>& k2 = sr.tracking.trajectories[1];
  bool extremum = false;
  for (std::size_t g = 1; g + 1 < k2.size(); ++g)
    extremum = extremum || (k2[g] > k2[g - 1] && k2[g] >= k2[g + 1]) || (k2[g] < k2[g - 1] && k2[g] <= k2[g + 1]);
  CHECK(extremum);
  const std::vector<double>& k1 = sr.tracking.trajectories[0];
  for (std::size_t g = 1; g < k1.size(); ++g) CHECK(k1[g] <= k1[g - 1]);
}

TEST_CASE("uniform dilation has no crossings") {
  const SweepResult sr = dilation_sweep(0.5);
  CHECK(count_kind(sr.tracking, EventKind::Crossing) == 0);
  CHECK(count_kind(sr.tracking, EventKind::AvoidedCrossing) == 0);
}

TEST_CASE("crossing-free ladders are tracked column by column") {
  std::vector<double> gamma;
  std::vector<std::vector<double>> levels;
  for (int g = 0; g < 30; ++g) {
    gamma.push_back(0.1 * g);
    levels.push_back({1.0 + 0.01 * g, 2.0 + 0.02 * g, 3.5 - 0.01 * g});
  }
  const Tracking t = track_levels(gamma, levels, 0.01, 1e-9);
  CHECK(t.events.empty());
  for (int g = 0; g < 30; ++g)
    for (int i = 0; i < 3; ++i) CHECK(t.trajectories[i][g] == levels[g][i]);
}

TEST_CASE("true crossing versus avoided crossing") {
  std::vector<double> gamma;
  std::vector<std::vector<double>> crossing, avoided;
  for (int g = 0; g <= 40; ++g) {
    const double x = -0.2 + 0.01 * g;
    gamma.push_back(x);
    std::vector<double> c{2.0 - 0.5 * x, 2.0 + 0.5 * x, 10.0};
    std::sort(c.begin(), c.end());
    crossing.push_back(c);
    const double w = std::sqrt(x * x + 0.05 * 0.05);
    avoided.push_back({2.0 - w, 2.0 + w, 10.0});
  }
  const Tracking tc = track_levels(gamma, crossing, 0.1, 1e-9);
  REQUIRE(count_kind(tc, EventKind::Crossing) == 1);
  for (const auto& e : tc.events)
    if (e.kind == EventKind::Crossing) CHECK(e.gamma == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(count_kind(tc, EventKind::AvoidedCrossing) == 0);

  const Tracking ta = track_levels(gamma, avoided, 0.1, 1e-9);
  CHECK(count_kind(ta, EventKind::Crossing) == 0);
  REQUIRE(count_kind(ta, EventKind::AvoidedCrossing) == 1);
  const LevelEvent& e = ta.events.front();
  CHECK(e.gamma == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(e.gap == doctest::Approx(0.1));
  CHECK(e.level_a == 1);
  CHECK(e.level_b == 2);
}

TEST_CASE("entropy decomposition") {
  ThermoState st;
  st.p = {0.5, 0.5};
  const std::vector<double> s = entropy_decomposition(st);
  CHECK(s[0] == doctest::Approx(std::log(2.0) / 2));
  CHECK(s[1] == doctest::Approx(std::log(2.0) / 2));
  const ThermoState cold = boltzmann(interval_partition_spectrum(10.0, 3.0, 200), 0.005);
  for (double c : entropy_decomposition(cold)) CHECK(c < 1e-6);
}

TEST_CASE("grid derivative is exact for quadratics inside") {
  const std::vector<double> x{0.0, 0.3, 0.45, 1.0, 1.7, 2.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v - v + 2.0);
  const std::vector<double> d = grid_derivative(x, y);
  for (std::size_t i = 1; i + 1 < x.size(); ++i) CHECK(d[i] == doctest::Approx(6.0 * x[i] - 1.0));
  std::vector<double> lin;
  for (double v : x) lin.push_back(-2.0 * v + 1.0);
  for (double v : grid_derivative(x, lin)) CHECK(v == doctest::Approx(-2.0));
}

TEST_CASE("avalanche in the confined 1D sweep") {
  const SweepResult sr = run_sweep(interval_sweep(5.0, 9.9, 99, {0.5}));
  const AvalancheReport rep = detect_avalanche(sr);
  REQUIRE(!rep.intervals.empty());
  for (const auto& [a, b] : rep.intervals) {
    CHECK(a >= 5.0);
    CHECK(b < 8.0);
  }
  CHECK(rep.interior_p1_max);
  CHECK(rep.interior_S_min);
  // S rises after l = 8
  const std::vector<double> S = sr.thermo_series(0, &ThermoState::S);
  for (std::size_t g = 1; g < sr.gamma.size(); ++g)
    if (sr.gamma[g - 1] >= 8.0 - 1e-9) CHECK(S[g] > S[g - 1]);
  // single interval ends within one step of the p_1 maximum
  REQUIRE(rep.intervals.size() == 1);
  CHECK(std::abs(rep.intervals.front().second - rep.argmax_p1) <= 0.05 + 1e-9);
}

TEST_CASE("no avalanche in the classical limit or under dilation") {
  const double lam = 10.0 / 50.0;
  const double T = 4.0 * kPi / (lam * lam);
  const SweepResult sr = run_sweep(interval_sweep(5.0, 9.5, 46, {T}));
  CHECK(detect_avalanche(sr).intervals.empty());
  CHECK(detect_avalanche(dilation_sweep(0.5)).intervals.empty());
  CHECK(detect_avalanche(dilation_sweep(3.0)).intervals.empty());
}

TEST_CASE("temperature calibration picks an interior entropy minimum") {
  const std::vector<double> Ts{0.2, 0.5, 1.0, 2.0};
  const auto rep = calibrate_temperature(interval_sweep(5.0, 9.9, 50), Ts, 8.0);
  REQUIRE(rep.has_value());
  CHECK(rep->interior_S_min);
  CHECK(rep->argmin_S <= 8.0);
  CHECK_FALSE(rep->intervals.empty());
  CHECK_FALSE(calibrate_temperature(interval_sweep(5.0, 9.9, 50), std::vector<double>{400.0}, 8.0).has_value());
}

TEST_CASE("too few points for derivatives") {
  CHECK_THROWS_AS(detect_avalanche(run_sweep(interval_sweep(5.0, 6.0, 4, {1.0}))), InsufficientLevelsError);
}

TEST_CASE("nested disks ground level falls along the sweep") {
  SweepConfig c;
  c.base = NestedDisks{1.0, 0.25, 0.0};
  c.gamma_from = 0.0;
  c.gamma_to = 0.5;
  c.steps = 6;
  c.M = 3;
  c.h = 0.02;
  c.richardson = false;
  c.measures = true;
  c.threads = 2;
  const SweepResult sr = run_sweep(c);
  const std::vector<double> k1 = sr.level_series(0);
  for (std::size_t g = 1; g < k1.size(); ++g) CHECK(k1[g] < k1[g - 1]);
  for (const auto& p : sr.points) {
    CHECK(p.r_in.has_value());
    CHECK_FALSE(p.d_H.has_value());
  }
  CHECK(*sr.points.back().r_in == doctest::Approx(0.625));
}

TEST_CASE("thread count does not change results") {
  SweepConfig c;
  c.base = NestedSquares{1.0, 0.675, 0.0};
  c.gamma_from = 0.0;
  c.gamma_to = 45.0;
  c.steps = 5;
  c.M = 4;
  c.h = 0.02;
  c.richardson = false;
  c.T = {20.0};
  c.threads = 1;
  const SweepResult a = run_sweep(c);
  c.threads = 3;
  const SweepResult b = run_sweep(c);
  for (std::size_t g = 0; g < a.points.size(); ++g) {
    CHECK(a.points[g].spectrum.k == b.points[g].spectrum.k);
    CHECK(a.points[g].thermo[0].S == b.points[g].thermo[0].S);
  }
}

TEST_CASE("descending ranges and bad sweeps") {
  const SweepResult up = run_sweep(interval_sweep(5.0, 8.0, 7));
  const SweepResult down = run_sweep(interval_sweep(8.0, 5.0, 7));
  CHECK(up.gamma == down.gamma);
  CHECK_THROWS_AS(run_sweep(interval_sweep(5.0, 10.0, 7)), ValidationError);
  CHECK_THROWS_AS(run_sweep(interval_sweep(5.0, 8.0, 1)), ValidationError);

  SweepConfig c;
  c.base = NestedDisks{};
  c.gamma_from = 0.0;
  c.gamma_to = 0.5;
  c.steps = 3;
  c.refinement.max_nodes = 100;
  try {
    run_sweep(c);
    FAIL("expected a refinement error");
  } catch (const RefinementNeededError& e) {
    CHECK(std::string(e.what()).find("gamma = 0") != std::string::npos);
  }
}

TEST_CASE("thermodynamics lengthen the spectrum beyond M") {
  const SweepPoint p = evaluate_point(interval_sweep(5.0, 8.0, 2, {3.0}), 6.0);
  CHECK(p.spectrum.size() > 4);
  CHECK(p.thermo.front().tail < 1e-9);
}

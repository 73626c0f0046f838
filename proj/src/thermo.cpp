#include "sist/thermo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sist/errors.hpp"

namespace sist {

namespace {

constexpr double kPi = std::numbers::pi;

double log_erfc(double x) {
  if (x < 20.0) return std::log(std::erfc(x));
  const double x2 = x * x;
  return -x2 - std::log(x * std::sqrt(kPi)) + std::log1p(-0.5 / x2 + 0.75 / (x2 * x2));
}

// Log of the Weyl-density integral of exp(-k^2/T) over [k_cut, inf), or
// -inf when the spectrum carries no geometry (complete level set).
double log_weyl_tail(const Spectrum& spec, double k_cut, double T) {
  if (spec.method == SpectrumMethod::Explicit || !spec.shape) return -std::numeric_limits<double>::infinity();
  const SizeParameters z = size_params(*spec.shape);
  if (z.dimension == 1) {
    // (P/pi) * int exp(-k^2/T) dk
    return std::log(z.perimeter / kPi * 0.5 * std::sqrt(kPi * T)) + log_erfc(k_cut / std::sqrt(T));
  }
  // W2'(k) <= A k / (2 pi)
  return std::log(z.area * T / (4.0 * kPi)) - k_cut * k_cut / T;
}

}  // namespace

ThermoState boltzmann(const Spectrum& spec, double T, std::size_t M, TruncationPolicy policy) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("temperature must be positive");
  const std::size_t n = spec.k.size();
  if (n == 0) throw InsufficientLevelsError("empty spectrum");

  // Energies are rounded once so that E[0] - E0 is exactly zero under FMA contraction.
  std::vector<double> E(n);
  for (std::size_t i = 0; i < n; ++i) E[i] = spec.k[i] * spec.k[i];
  const double E0 = E[0];
  auto rel_weight = [&](std::size_t i) { return std::exp(-(E[i] - E0) / T); };

  const bool complete = spec.method == SpectrumMethod::Explicit;
  std::size_t m = complete ? n : std::max<std::size_t>(M, 1);
  if (m > n) throw RefinementNeededError("requested truncation exceeds the available spectrum");

  double sum = 0.0;  // sum of relative weights of the first m levels
  for (std::size_t i = 0; i < m; ++i) sum += rel_weight(i);

  double log_tail_rel = -std::numeric_limits<double>::infinity();
  for (;;) {
    const double k_last = spec.k[m - 1];
    log_tail_rel = log_weyl_tail(spec, k_last, T) + E0 / T - std::log(sum);
    const bool last_ok = complete || rel_weight(m - 1) / sum < policy.last_weight;
    const bool tail_ok = complete || log_tail_rel < std::log(policy.tail_weight);
    if (last_ok && tail_ok) break;
    if (m == n)
      throw RefinementNeededError("spectrum of " + std::to_string(n) + " levels too short for T = " +
                                  std::to_string(T) + "; request more levels");
    sum += rel_weight(m);
    ++m;
  }

  ThermoState st;
  st.T = T;
  st.M = m;
  st.lnZ = -E0 / T + std::log(sum);
  st.Z = std::exp(st.lnZ);
  st.F = -T * st.lnZ;
  st.tail = std::exp(log_tail_rel);
  st.p.resize(m);
  const double log_sum = std::log(sum);
  double S = 0.0;
  double U = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = rel_weight(i) / sum;
    st.p[i] = p;
    U += p * E[i];
    if (p > 0.0) S += p * ((E[i] - E0) / T + log_sum);
  }
  st.S = S;
  st.U = U;
  return st;
}

std::vector<double> entropy_contributions(const ThermoState& state) {
  std::vector<double> out(state.p.size());
  for (std::size_t i = 0; i < state.p.size(); ++i) {
    const double p = state.p[i];
    out[i] = p > 0.0 ? -p * std::log(p) : 0.0;
  }
  return out;
}

double GridField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * std::pow(grid.h, grid.dim());
}

GridField thermal_density(std::span<const EigenField> fields, std::span<const double> probs) {
  if (fields.empty()) throw ValidationError("thermal density needs at least one eigenfield");
  if (probs.size() > fields.size()) throw ValidationError("more occupation probabilities than eigenfields");
  const GridSpec& g = fields.front().field.grid;
  GridField n{g, std::vector<double>(g.size(), 0.0)};
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const GridField& f = fields[i].field;
    if (f.grid.nx != g.nx || f.grid.ny != g.ny || f.grid.h != g.h || f.values.size() != g.size())
      throw ValidationError("eigenfields live on mismatched grids");
    for (std::size_t q = 0; q < f.values.size(); ++q) n.values[q] += probs[i] * f.values[q] * f.values[q];
  }
  return n;
}

double thermal_wavelength(double T) {
  if (!(T > 0.0)) throw ValidationError("temperature must be positive");
  return 2.0 * std::sqrt(kPi / T);
}

double qbl_thickness(double T) { return thermal_wavelength(T) / 4.0; }

double effective_volume(double Z, double T, int dimension) {
  return std::pow(thermal_wavelength(T), dimension) * Z;
}

double effective_volume(const ThermoState& state, int dimension) {
  return std::exp(dimension * std::log(thermal_wavelength(state.T)) + state.lnZ);
}

}  // namespace sist

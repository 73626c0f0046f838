#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sist/field.hpp"
#include "sist/spectrum.hpp"

namespace sist {

/// Canonical single-particle state in reduced units hbar = 2m = k_B = 1, so
/// a level with wavenumber k has energy k^2.
struct ThermoState {
  double T = 0.0;
  double Z = 0.0;     ///< may underflow to 0 deep in the confined regime; use lnZ
  double lnZ = 0.0;
  double F = 0.0;     ///< -T ln Z
  double S = 0.0;     ///< -sum p ln p
  double U = 0.0;     ///< sum p E
  std::vector<double> p;  ///< occupation of each kept level
  std::size_t M = 0;      ///< levels kept
  double tail = 0.0;      ///< estimated probability weight of the omitted levels

  double F_over_T() const { return -lnZ; }
  double U_over_T() const { return U / T; }
};

struct TruncationPolicy {
  double last_weight = 1e-12;  ///< exp(-E_M/T)/Z of the last kept level
  double tail_weight = 1e-9;   ///< Weyl tail integral relative to Z
};

/// Boltzmann statistics of the spectrum at temperature T. Starts from the
/// first M levels (M = 0 starts from one level) and raises M until the
/// truncation policy holds. Explicit spectra are complete and have no tail.
/// Throws RefinementNeededError when the spectrum runs out first.
ThermoState boltzmann(const Spectrum& spec, double T, std::size_t M = 0, TruncationPolicy policy = {});

/// Per-level entropy contributions -p_i ln p_i.
std::vector<double> entropy_contributions(const ThermoState& state);

/// n(r) = sum_i p_i psi_i(r)^2 over the first probs.size() fields.
GridField thermal_density(std::span<const EigenField> fields, std::span<const double> probs);

/// Thermal de Broglie wavelength 2 sqrt(pi/T).
double thermal_wavelength(double T);

/// Quantum boundary layer thickness, a quarter of the thermal wavelength.
double qbl_thickness(double T);

/// Partition-function proxy for the effective volume, lambda_th^D Z.
double effective_volume(double Z, double T, int dimension);
double effective_volume(const ThermoState& state, int dimension);

}  // namespace sist

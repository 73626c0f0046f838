#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sist/geometry.hpp"

namespace sist {

enum class SpectrumMethod {
  Analytic,  ///< closed form
  Grid,      ///< finite-difference solve on a masked grid
  Explicit,  ///< user-supplied finite level set (complete, no tail)
};

std::string_view method_name(SpectrumMethod m);

/// Ascending Dirichlet wavenumbers k_i; the Laplacian eigenvalue is k_i^2.
/// Degenerate levels appear as repeated (or numerically close) entries.
struct Spectrum {
  std::vector<double> k;
  /// Per-level error magnitude in k (Richardson estimate); zeros for analytic spectra.
  std::vector<double> error;
  SpectrumMethod method = SpectrumMethod::Explicit;
  /// Grid spacing of the finest solve (Grid only).
  double h = 0.0;
  /// Relative gap below which neighbouring levels count as degenerate.
  double degeneracy_tol = 1e-9;
  std::optional<ShapeConfig> shape;

  std::size_t size() const { return k.size(); }
};

/// A finite, complete level set (e.g. a toy spectrum for thermodynamics).
Spectrum explicit_spectrum(std::vector<double> k);

}  // namespace sist

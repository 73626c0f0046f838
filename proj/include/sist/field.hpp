#pragma once

#include <vector>

#include "sist/geometry.hpp"

namespace sist {

/// Scalar field sampled on every node of a grid, row-major, zero outside the
/// domain.
struct GridField {
  GridSpec grid;
  std::vector<double> values;

  /// sum of values * h^D
  double integral() const;
};

/// Dirichlet eigenfunction with sum psi^2 h^D = 1 and its largest-magnitude
/// node positive.
struct EigenField {
  GridField field;
  double k = 0.0;
};

}  // namespace sist

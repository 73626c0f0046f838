#pragma once

#include "sist/geometry.hpp"
#include "sist/spectrum.hpp"

namespace sist {

/// The M smallest members of {pi i/l} U {pi i/(L-l)}, ascending, ties kept.
Spectrum interval_partition_spectrum(double L, double l, int M);

/// The M smallest sqrt((pi i1 b/a^2)^2 + (pi i2/b)^2), i1, i2 >= 1.
Spectrum rectangle_spectrum(double a, double b, int M);

bool has_analytic_spectrum(const ShapeConfig& shape);

/// Dispatches to the closed forms above; ValidationError for families
/// without one.
Spectrum analytic_spectrum(const ShapeConfig& shape, int M);

}  // namespace sist

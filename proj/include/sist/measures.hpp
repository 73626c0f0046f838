#pragma once

#include <vector>

#include "sist/geometry.hpp"

namespace sist {

/// Comparison disk for the Hausdorff sphericity measure.
struct DiskSpec {
  Point center;
  double radius = 1.0;
};

/// Radius of the largest disk (interval in 1D) that fits in the domain.
/// Interval and nested disks use closed forms; the rectangle too. Nested
/// squares maximise the exact boundary distance: a lattice scan at spacing
/// `h` (0 picks a_out/400) refined by compass search.
double inscribed_radius(const ShapeConfig& shape, double h = 0.0);

/// Largest distance from an interior node to the complement of the mask,
/// via an exact Euclidean distance transform. Throws DegenerateGeometryError
/// for an empty mask.
double inscribed_radius(const DomainMask& mask);

/// Exact Euclidean distance transform: for every cell, the distance (in
/// physical units) to the nearest cell where `feature` is set. Cells outside
/// the lattice are not features.
std::vector<double> distance_transform(const std::vector<std::uint8_t>& feature, int nx, int ny, double h);

/// Disk of the region's area centred at its centroid.
DiskSpec equal_area_disk(const DomainMask& region);

/// Symmetric Hausdorff distance between the filled region and the filled
/// disk, both sampled on the region's lattice.
double hausdorff_distance(const DomainMask& region, const DiskSpec& disk);

/// The x >= 0, y >= 0 part of a nested-squares domain. Throws
/// ValidationError for other families.
DomainMask quadrant_region(const ShapeConfig& shape, double h);
DomainMask quadrant_region(const ShapeConfig& shape, const GridSpec& grid);

}  // namespace sist

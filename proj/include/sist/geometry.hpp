#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sist {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Box [0, L] split by a zero-thickness impenetrable partition at x = l.
struct Interval1D {
  double L = 10.0;
  double l = 5.0;
};

/// Disk of radius R at the origin with a disk of radius r removed; the
/// removed disk is centred at (s, 0).
struct NestedDisks {
  double R = 1.0;
  double r = 0.25;
  double s = 0.0;
};

/// Square of side a_out at the origin with a concentric square of side a_in
/// removed; the inner square is rotated by theta degrees.
struct NestedSquares {
  double a_out = 1.0;
  double a_in = 0.675;
  double theta = 0.0;
};

/// Area-preserving rectangle with sides a^2/b (along x) and b (along y).
struct Rectangle {
  double a = 1.0;
  double b = 1.0;
};

using ShapeConfig = std::variant<Interval1D, NestedDisks, NestedSquares, Rectangle>;

enum class Family { Interval1D, NestedDisks, NestedSquares, Rectangle };

Family family_of(const ShapeConfig& shape);
std::string_view family_name(Family f);
/// Accepts the config names ("interval", "nested_disks", "nested_squares",
/// "rectangle"); throws ConfigError otherwise.
Family parse_family(std::string_view name);

/// Spatial dimension of the domain (1 for the interval, 2 otherwise).
int dimension(const ShapeConfig& shape);

/// Throws ValidationError when the shape violates its invariants.
void validate(const ShapeConfig& shape);

/// The shape variable that a size-invariant sweep moves: l, s, theta or b.
double shape_variable(const ShapeConfig& shape);
ShapeConfig with_shape_variable(const ShapeConfig& shape, double value);

/// Open-set membership: boundary points (including the partition) are outside.
bool contains(const ShapeConfig& shape, Point p);

/// Euclidean distance from p to the nearest boundary point of the domain.
/// Only meaningful for points where contains() is true.
double boundary_distance(const ShapeConfig& shape, Point p);

/// Lebesgue size parameters. In 1D `perimeter` holds the total length and
/// `vertices` the count of Dirichlet endpoints.
struct SizeParameters {
  int dimension = 2;
  double volume = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  double vertices = 0.0;

  bool operator==(const SizeParameters&) const = default;
};

SizeParameters size_params(const ShapeConfig& shape);

struct BoundingBox {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
};

BoundingBox bounding_box(const ShapeConfig& shape);

/// Uniform lattice, symmetric about its centre so mirror-symmetric shapes
/// rasterize to exactly mirror-symmetric masks. ny == 1 denotes a 1D grid.
struct GridSpec {
  double h = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int nx = 0;
  int ny = 0;

  double x(int i) const { return cx + (i - 0.5 * (nx - 1)) * h; }
  double y(int j) const { return ny == 1 ? cy : cy + (j - 0.5 * (ny - 1)) * h; }
  Point node(int i, int j) const { return {x(i), y(j)}; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  int dim() const { return ny == 1 ? 1 : 2; }
  /// Same centre, half the spacing; every node of *this is a node of the result.
  GridSpec refined() const;
};

/// Smallest centred grid of spacing h covering the box. Throws
/// ValidationError for h <= 0.
GridSpec make_grid(const BoundingBox& box, double h);
GridSpec make_grid(const ShapeConfig& shape, double h);

/// Row-major boolean grid of interior points.
struct DomainMask {
  GridSpec grid;
  std::vector<std::uint8_t> inside;

  bool at(int i, int j) const { return inside[grid.index(i, j)] != 0; }
  std::size_t count() const;
  /// count * h^D
  double measure() const;
};

DomainMask rasterize(const ShapeConfig& shape, const GridSpec& grid);
DomainMask rasterize(const ShapeConfig& shape, double h);
/// Generic rasterization of an open region described by a predicate.
DomainMask rasterize(const std::function<bool(Point)>& inside, const GridSpec& grid);

}  // namespace sist

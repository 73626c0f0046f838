#include "sist/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sist/errors.hpp"

namespace sist {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

// Inner square frame coordinates of p.
Point to_inner_frame(const NestedSquares& sq, Point p) {
  const double t = deg2rad(sq.theta);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c * p.x + s * p.y, -s * p.x + c * p.y};
}

// Distance from p to an axis-aligned centred square of half side `half`,
// for p outside the square (zero inside).
double distance_outside_square(Point q, double half) {
  const double dx = std::max(std::abs(q.x) - half, 0.0);
  const double dy = std::max(std::abs(q.y) - half, 0.0);
  return std::hypot(dx, dy);
}

}  // namespace

Family family_of(const ShapeConfig& shape) {
  return std::visit(overloaded{
                        [](const Interval1D&) { return Family::Interval1D; },
                        [](const NestedDisks&) { return Family::NestedDisks; },
                        [](const NestedSquares&) { return Family::NestedSquares; },
                        [](const Rectangle&) { return Family::Rectangle; },
                    },
                    shape);
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Interval1D:
      return "interval";
    case Family::NestedDisks:
      return "nested_disks";
    case Family::NestedSquares:
      return "nested_squares";
    case Family::Rectangle:
      return "rectangle";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "interval" || name == "interval1d") return Family::Interval1D;
  if (name == "nested_disks") return Family::NestedDisks;
  if (name == "nested_squares") return Family::NestedSquares;
  if (name == "rectangle") return Family::Rectangle;
  throw ConfigError("unknown shape family '" + std::string(name) + "'");
}

int dimension(const ShapeConfig& shape) {
  return family_of(shape) == Family::Interval1D ? 1 : 2;
}

void validate(const ShapeConfig& shape) {
  std::visit(overloaded{
                 [](const Interval1D& s) {
                   if (!(s.L > 0.0) || !(s.l > 0.0) || !(s.l < s.L))
                     throw ValidationError("interval requires 0 < l < L");
                 },
                 [](const NestedDisks& s) {
                   if (!(s.R > 0.0) || !(s.r > 0.0) || !(s.s >= 0.0))
                     throw ValidationError("nested disks require R > 0, r > 0, s >= 0");
                   if (!(s.s + s.r < s.R))
                     throw ValidationError("inner disk must lie strictly inside the outer disk (s + r < R)");
                 },
                 [](const NestedSquares& s) {
                   if (!(s.a_out > 0.0) || !(s.a_in > 0.0))
                     throw ValidationError("nested squares require a_out > 0, a_in > 0");
                   if (!(s.theta >= 0.0) || !(s.theta <= 45.0))
                     throw ValidationError("nested squares require 0 <= theta <= 45 degrees");
                   const double t = deg2rad(s.theta);
                   const double reach = s.a_in * (std::abs(std::cos(t)) + std::abs(std::sin(t))) / 2.0;
                   if (!(reach < s.a_out / 2.0))
                     throw ValidationError("rotated inner square must lie strictly inside the outer square");
                 },
                 [](const Rectangle& s) {
                   if (!(s.a > 0.0) || !(s.b > 0.0)) throw ValidationError("rectangle requires a > 0, b > 0");
                 },
             },
             shape);
}

double shape_variable(const ShapeConfig& shape) {
  return std::visit(overloaded{
                        [](const Interval1D& s) { return s.l; },
                        [](const NestedDisks& s) { return s.s; },
                        [](const NestedSquares& s) { return s.theta; },
                        [](const Rectangle& s) { return s.b; },
                    },
                    shape);
}

ShapeConfig with_shape_variable(const ShapeConfig& shape, double value) {
  return std::visit(overloaded{
                        [value](Interval1D s) -> ShapeConfig { s.l = value; return s; },
                        [value](NestedDisks s) -> ShapeConfig { s.s = value; return s; },
                        [value](NestedSquares s) -> ShapeConfig { s.theta = value; return s; },
                        [value](Rectangle s) -> ShapeConfig { s.b = value; return s; },
                    },
                    shape);
}

bool contains(const ShapeConfig& shape, Point p) {
  return std::visit(overloaded{
                        [p](const Interval1D& s) { return p.x > 0.0 && p.x < s.L && p.x != s.l; },
                        [p](const NestedDisks& s) {
                          return std::hypot(p.x, p.y) < s.R && std::hypot(p.x - s.s, p.y) > s.r;
                        },
                        [p](const NestedSquares& s) {
                          const double half = s.a_out / 2.0;
                          if (!(std::abs(p.x) < half && std::abs(p.y) < half)) return false;
                          const Point q = to_inner_frame(s, p);
                          const double inner = s.a_in / 2.0;
                          return std::abs(q.x) > inner || std::abs(q.y) > inner;
                        },
                        [p](const Rectangle& s) {
                          return std::abs(p.x) < s.a * s.a / (2.0 * s.b) && std::abs(p.y) < s.b / 2.0;
                        },
                    },
                    shape);
}

double boundary_distance(const ShapeConfig& shape, Point p) {
  return std::visit(overloaded{
                        [p](const Interval1D& s) {
                          return std::min({p.x, std::abs(p.x - s.l), s.L - p.x});
                        },
                        [p](const NestedDisks& s) {
                          return std::min(s.R - std::hypot(p.x, p.y), std::hypot(p.x - s.s, p.y) - s.r);
                        },
                        [p](const NestedSquares& s) {
                          const double half = s.a_out / 2.0;
                          const double outer = std::min(half - std::abs(p.x), half - std::abs(p.y));
                          const double inner = distance_outside_square(to_inner_frame(s, p), s.a_in / 2.0);
                          return std::min(outer, inner);
                        },
                        [p](const Rectangle& s) {
                          return std::min(s.a * s.a / (2.0 * s.b) - std::abs(p.x), s.b / 2.0 - std::abs(p.y));
                        },
                    },
                    shape);
}

SizeParameters size_params(const ShapeConfig& shape) {
  validate(shape);
  return std::visit(overloaded{
                        [](const Interval1D& s) {
                          // Zero-thickness partition: two one-sided Dirichlet endpoints
                          // on top of the two outer ones.
                          return SizeParameters{1, 0.0, 0.0, s.L, 4.0};
                        },
                        [](const NestedDisks& s) {
                          return SizeParameters{2, 0.0, kPi * (s.R * s.R - s.r * s.r), 2.0 * kPi * (s.R + s.r), 0.0};
                        },
                        [](const NestedSquares& s) {
                          return SizeParameters{2, 0.0, s.a_out * s.a_out - s.a_in * s.a_in, 4.0 * (s.a_out + s.a_in), 8.0};
                        },
                        [](const Rectangle& s) {
                          return SizeParameters{2, 0.0, s.a * s.a, 2.0 * (s.a * s.a / s.b + s.b), 4.0};
                        },
                    },
                    shape);
}

BoundingBox bounding_box(const ShapeConfig& shape) {
  return std::visit(overloaded{
                        [](const Interval1D& s) { return BoundingBox{0.0, s.L, 0.0, 0.0}; },
                        [](const NestedDisks& s) { return BoundingBox{-s.R, s.R, -s.R, s.R}; },
                        [](const NestedSquares& s) {
                          const double half = s.a_out / 2.0;
                          return BoundingBox{-half, half, -half, half};
                        },
                        [](const Rectangle& s) {
                          const double w = s.a * s.a / (2.0 * s.b);
                          return BoundingBox{-w, w, -s.b / 2.0, s.b / 2.0};
                        },
                    },
                    shape);
}

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.h = h / 2.0;
  g.nx = 2 * (nx - 1) + 1;
  g.ny = ny == 1 ? 1 : 2 * (ny - 1) + 1;
  return g;
}

GridSpec make_grid(const BoundingBox& box, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("grid spacing h must be positive");
  auto nodes = [h](double extent) {
    // Slack absorbs rounding when the extent is an integer multiple of h.
    return static_cast<int>(std::ceil(extent / h - 1e-9)) + 1;
  };
  GridSpec g;
  g.h = h;
  g.cx = 0.5 * (box.xmin + box.xmax);
  g.cy = 0.5 * (box.ymin + box.ymax);
  g.nx = nodes(box.xmax - box.xmin);
  g.ny = box.ymax > box.ymin ? nodes(box.ymax - box.ymin) : 1;
  return g;
}

GridSpec make_grid(const ShapeConfig& shape, double h) { return make_grid(bounding_box(shape), h); }

std::size_t DomainMask::count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

double DomainMask::measure() const {
  return static_cast<double>(count()) * std::pow(grid.h, grid.dim());
}

DomainMask rasterize(const ShapeConfig& shape, const GridSpec& grid) {
  validate(shape);
  if (!(grid.h > 0.0)) throw ValidationError("grid spacing h must be positive");
  // Nodes within rounding distance of the boundary count as boundary nodes.
  const double margin = 1e-9 * grid.h;
  return rasterize(
      [&shape, margin](Point p) { return contains(shape, p) && boundary_distance(shape, p) > margin; }, grid);
}

DomainMask rasterize(const ShapeConfig& shape, double h) { return rasterize(shape, make_grid(shape, h)); }

DomainMask rasterize(const std::function<bool(Point)>& inside, const GridSpec& grid) {
  DomainMask mask{grid, std::vector<std::uint8_t>(grid.size(), 0)};
  bool any = false;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (inside(grid.node(i, j))) {
        mask.inside[grid.index(i, j)] = 1;
        any = true;
      }
    }
  }
  if (!any) throw DegenerateGeometryError("rasterization produced an empty mask; grid spacing too coarse");
  return mask;
}

}  // namespace sist

#include "sist/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "sist/errors.hpp"

namespace sist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher lower envelope of parabolas; f and d hold squared
// distances in lattice units.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  int first = 0;
  while (first < n && f[first] == kInf) ++first;
  if (first == n) {
    std::fill(d, d + n, kInf);
    return;
  }
  auto parab = [f](int q) { return f[q] + static_cast<double>(q) * q; };
  std::size_t k = 0;
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = (parab(q) - parab(v[k])) / (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = (parab(q) - parab(v[k])) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  std::size_t j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    d[q] = static_cast<double>(q - v[j]) * (q - v[j]) + f[v[j]];
  }
}

}  // namespace

std::vector<double> distance_transform(const std::vector<std::uint8_t>& feature, int nx, int ny, double h) {
  const auto total = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<double> grid(total);
  for (std::size_t c = 0; c < total; ++c) grid[c] = feature[c] ? 0.0 : kInf;

  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> in(static_cast<std::size_t>(std::max(nx, ny)));
  std::vector<double> out(in.size());
  for (int j = 0; j < ny; ++j) {
    double* row = grid.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
    std::copy(row, row + nx, in.begin());
    edt_1d(in.data(), row, nx, v, z);
  }
  if (ny > 1) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) in[static_cast<std::size_t>(j)] = grid[static_cast<std::size_t>(j) * nx + i];
      edt_1d(in.data(), out.data(), ny, v, z);
      for (int j = 0; j < ny; ++j) grid[static_cast<std::size_t>(j) * nx + i] = out[static_cast<std::size_t>(j)];
    }
  }
  for (double& g : grid) g = std::sqrt(g) * h;
  return grid;
}

double inscribed_radius(const ShapeConfig& shape, double h) {
  validate(shape);
  if (const auto* s = std::get_if<Interval1D>(&shape)) return std::max(s->l, s->L - s->l) / 2.0;
  if (const auto* s = std::get_if<NestedDisks>(&shape)) return (s->R + s->s - s->r) / 2.0;
  if (const auto* s = std::get_if<Rectangle>(&shape)) return std::min(s->a * s->a / s->b, s->b) / 2.0;

  const auto& sq = std::get<NestedSquares>(shape);
  const double step0 = h > 0.0 ? h : sq.a_out / 400.0;
  const GridSpec g = make_grid(shape, step0);

  // Best lattice points, then compass search on the exact boundary distance.
  std::vector<std::pair<double, Point>> best;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Point p = g.node(i, j);
      if (!contains(shape, p)) continue;
      best.emplace_back(boundary_distance(shape, p), p);
    }
  }
  if (best.empty()) throw DegenerateGeometryError("no interior lattice point for inscribed radius");
  const std::size_t keep = std::min<std::size_t>(16, best.size());
  std::partial_sort(best.begin(), best.begin() + static_cast<long>(keep), best.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });

  constexpr int kDirs = 16;
  double result = best.front().first;
  for (std::size_t c = 0; c < keep; ++c) {
    Point p = best[c].second;
    double val = best[c].first;
    for (double step = step0; step > 1e-13 * sq.a_out; step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (int d = 0; d < kDirs; ++d) {
          const double ang = 2.0 * std::numbers::pi * d / kDirs;
          const Point q{p.x + step * std::cos(ang), p.y + step * std::sin(ang)};
          if (!contains(shape, q)) continue;
          const double vq = boundary_distance(shape, q);
          if (vq > val) {
            val = vq;
            p = q;
            moved = true;
          }
        }
      }
    }
    result = std::max(result, val);
  }
  return result;
}

double inscribed_radius(const DomainMask& mask) {
  const GridSpec& g = mask.grid;
  const int px = g.nx + 2;
  const int py = g.ny == 1 ? 1 : g.ny + 2;
  const int oy = g.ny == 1 ? 0 : 1;
  std::vector<std::uint8_t> feature(static_cast<std::size_t>(px) * static_cast<std::size_t>(py), 1);
  bool any = false;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (mask.at(i, j)) {
        feature[static_cast<std::size_t>(j + oy) * px + static_cast<std::size_t>(i + 1)] = 0;
        any = true;
      }
    }
  }
  if (!any) throw DegenerateGeometryError("inscribed radius of an empty mask");
  const std::vector<double> d = distance_transform(feature, px, py, g.h);
  return *std::max_element(d.begin(), d.end());
}

DiskSpec equal_area_disk(const DomainMask& region) {
  const GridSpec& g = region.grid;
  double sx = 0.0;
  double sy = 0.0;
  std::size_t n = 0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!region.at(i, j)) continue;
      sx += g.x(i);
      sy += g.y(j);
      ++n;
    }
  }
  if (n == 0) throw DegenerateGeometryError("equal-area disk of an empty region");
  const double area = static_cast<double>(n) * g.h * g.h;
  return {{sx / static_cast<double>(n), sy / static_cast<double>(n)}, std::sqrt(area / std::numbers::pi)};
}

double hausdorff_distance(const DomainMask& region, const DiskSpec& disk) {
  if (!(disk.radius > 0.0)) throw ValidationError("comparison disk needs a positive radius");
  const GridSpec& g = region.grid;
  if (region.count() == 0) throw DegenerateGeometryError("Hausdorff distance of an empty region");

  // Region side: sup over region nodes of the distance to the filled disk.
  double to_disk = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!region.at(i, j)) continue;
      const double d = std::hypot(g.x(i) - disk.center.x, g.y(j) - disk.center.y) - disk.radius;
      to_disk = std::max(to_disk, d);
    }
  }

  // Disk side: lattice extended to cover the disk, distance transform with
  // the region nodes as features.
  const double h = g.h;
  const auto lo_i = std::min(0, static_cast<int>(std::floor((disk.center.x - disk.radius - g.x(0)) / h)) - 1);
  const auto hi_i = std::max(g.nx - 1, static_cast<int>(std::ceil((disk.center.x + disk.radius - g.x(0)) / h)) + 1);
  const auto lo_j = std::min(0, static_cast<int>(std::floor((disk.center.y - disk.radius - g.y(0)) / h)) - 1);
  const auto hi_j = std::max(g.ny - 1, static_cast<int>(std::ceil((disk.center.y + disk.radius - g.y(0)) / h)) + 1);
  const int ex = hi_i - lo_i + 1;
  const int ey = hi_j - lo_j + 1;
  std::vector<std::uint8_t> feature(static_cast<std::size_t>(ex) * static_cast<std::size_t>(ey), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (region.at(i, j)) feature[static_cast<std::size_t>(j - lo_j) * ex + static_cast<std::size_t>(i - lo_i)] = 1;
  const std::vector<double> dist = distance_transform(feature, ex, ey, h);

  double to_region = 0.0;
  for (int j = lo_j; j <= hi_j; ++j) {
    for (int i = lo_i; i <= hi_i; ++i) {
      const double x = g.x(0) + i * h;
      const double y = g.y(0) + j * h;
      if (std::hypot(x - disk.center.x, y - disk.center.y) > disk.radius) continue;
      to_region = std::max(to_region, dist[static_cast<std::size_t>(j - lo_j) * ex + static_cast<std::size_t>(i - lo_i)]);
    }
  }
  return std::max(to_disk, to_region);
}

DomainMask quadrant_region(const ShapeConfig& shape, const GridSpec& grid) {
  if (family_of(shape) != Family::NestedSquares) throw ValidationError("quadrant region is defined for nested squares only");
  DomainMask mask = rasterize(shape, grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.x(i) < 0.0 || grid.y(j) < 0.0) mask.inside[grid.index(i, j)] = 0;
  if (mask.count() == 0) throw DegenerateGeometryError("empty quadrant");
  return mask;
}

DomainMask quadrant_region(const ShapeConfig& shape, double h) { return quadrant_region(shape, make_grid(shape, h)); }

}  // namespace sist

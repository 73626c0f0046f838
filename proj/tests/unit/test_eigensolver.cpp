#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sist/analytic.hpp"
#include "sist/eigensolver.hpp"
#include "sist/errors.hpp"
#include "sist/oracles.hpp"

using namespace sist;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

DomainMask unit_disk(double h) {
  return rasterize([](Point p) { return p.x * p.x + p.y * p.y < 1.0; }, make_grid(BoundingBox{-1, 1, -1, 1}, h));
}

}  // namespace

TEST_CASE("single interior node") {
  const DiscreteOperator op = assemble(rasterize(Rectangle{1.0, 1.0}, 0.5));
  REQUIRE(op.size() == 1);
  CHECK(op.matrix.coeff(0, 0) == doctest::Approx(16.0));
  const ModeSet m = lowest_modes(op, 1);
  CHECK(m.spectrum.k[0] == doctest::Approx(4.0));
  CHECK(m.spectrum.method == SpectrumMethod::Grid);
}

TEST_CASE("operator is symmetric with the five-point pattern") {
  const DiscreteOperator op = assemble(rasterize(NestedDisks{1.0, 0.25, 0.3}, 0.1));
  const Eigen::SparseMatrix<double> t = op.matrix.transpose();
  CHECK((op.matrix - t).norm() == 0.0);
  for (int c = 0; c < op.matrix.outerSize(); ++c) {
    int n = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, c); it; ++it) ++n;
    CHECK(n <= 5);
  }
}

TEST_CASE("unit square at h = 1/200") {
  const Spectrum s = solve_on_grid(Rectangle{1.0, 1.0}, 6, 1.0 / 200.0).spectrum;
  const std::vector<double> ref = oracle::rectangle_bruteforce(1.0, 1.0, 6);
  const double pi = std::numbers::pi;
  const double expected[] = {pi * std::sqrt(2.0), pi * std::sqrt(5.0), pi * std::sqrt(5.0),
                             pi * std::sqrt(8.0), pi * std::sqrt(10.0), pi * std::sqrt(10.0)};
  for (int i = 0; i < 6; ++i) {
    CHECK(ref[i] == doctest::Approx(expected[i]));
    CHECK(rel(s.k[i], expected[i]) <= 5e-3);
  }
}

TEST_CASE("unit disk at h = 1/200") {
  const double k1 = lowest_modes(assemble(unit_disk(1.0 / 200.0)), 1).spectrum.k[0];
  CHECK(rel(k1, oracle::bessel_j0_first_zero()) <= 5e-3);
}

TEST_CASE("concentric annulus has a degenerate first excited pair") {
  for (double h : {0.02, 0.01}) {
    const Spectrum s = solve_on_grid(NestedDisks{1.0, 0.25, 0.0}, 3, h).spectrum;
    CHECK(std::abs(s.k[2] - s.k[1]) <= s.degeneracy_tol * s.k[1]);
    CHECK(std::abs(s.k[1] - s.k[0]) > s.degeneracy_tol * s.k[0]);
  }
}

TEST_CASE("dense and Krylov paths agree") {
  const DiscreteOperator op = assemble(rasterize(NestedSquares{1.0, 0.675, 20.0}, 0.02));
  REQUIRE(op.size() > 1200);
  SolverOptions dense;
  dense.dense_cutoff = 1'000'000;
  const ModeSet a = lowest_modes(op, 12, dense);
  const ModeSet b = lowest_modes(op, 12);
  for (int i = 0; i < 12; ++i) CHECK(a.spectrum.k[i] == doctest::Approx(b.spectrum.k[i]).epsilon(1e-7));
}

TEST_CASE("residual contract and field orthonormality") {
  SolverOptions o;
  o.want_fields = true;
  const ModeSet m = solve_on_grid(NestedDisks{1.0, 0.25, 0.4}, 8, 0.02, o);
  REQUIRE(m.fields.size() == 8);
  for (double r : m.residual) CHECK(r <= o.tol);
  const double h2 = 0.02 * 0.02;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t n = 0; n < m.fields[i].field.values.size(); ++n)
        dot += m.fields[i].field.values[n] * m.fields[j].field.values[n];
      dot *= h2;
      if (i == j)
        CHECK(dot == doctest::Approx(1.0).epsilon(1e-10));
      else
        CHECK(std::abs(dot) <= 1e-6);
    }
  for (const auto& f : m.fields) {
    const auto& v = f.field.values;
    const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    CHECK(*it > 0.0);
  }
}

TEST_CASE("enlarging the mask never raises the ground level") {
  const GridSpec g = make_grid(BoundingBox{-1, 1, -1, 1}, 0.025);
  double prev = 1e9;
  for (double R : {0.5, 0.6, 0.75, 0.9, 1.0}) {
    const DomainMask m = rasterize([R](Point p) { return p.x * p.x + p.y * p.y < R * R; }, g);
    const double k1 = lowest_modes(assemble(m), 1).spectrum.k[0];
    CHECK(k1 <= prev);
    prev = k1;
  }
}

TEST_CASE("Rayleigh-Faber-Krahn bound") {
  const double j01 = oracle::bessel_j0_first_zero();
  const ShapeConfig shapes[] = {NestedDisks{1.0, 0.25, 0.0}, NestedDisks{1.0, 0.25, 0.5}, NestedSquares{1.0, 0.675, 0.0},
                                NestedSquares{1.0, 0.675, 45.0}, Rectangle{1.0, 1.0}};
  for (const auto& s : shapes) {
    const double k1 = solve_on_grid(s, 1, 0.01).spectrum.k[0];
    CHECK(k1 >= 0.99 * j01 * std::sqrt(std::numbers::pi / size_params(s).area));
  }
}

TEST_CASE("Richardson estimate shrinks at second order") {
  const double e50 = converged_modes(Rectangle{1.0, 1.0}, 1, 1.0 / 50).spectrum.error[0];
  const double e100 = converged_modes(Rectangle{1.0, 1.0}, 1, 1.0 / 100).spectrum.error[0];
  CHECK(e50 / e100 == doctest::Approx(4.0).epsilon(0.1));
  // and it tracks the true error of the refined solve
  const ModeSet m = converged_modes(Rectangle{1.0, 1.0}, 1, 1.0 / 50);
  CHECK(std::abs(m.spectrum.k[0] - std::numbers::pi * std::sqrt(2.0)) <= 1.5 * m.spectrum.error[0]);
  CHECK(m.spectrum.h == doctest::Approx(1.0 / 100));
}

TEST_CASE("analytic families bypass the grid") {
  const Spectrum s = converged_spectrum(Interval1D{10.0, 7.0}, 5, 0.1);
  CHECK(s.method == SpectrumMethod::Analytic);
  for (double e : s.error) CHECK(e == 0.0);
  CHECK(s.k[0] == doctest::Approx(std::numbers::pi / 7));
}

TEST_CASE("refinement failures") {
  RefinementOptions small;
  small.max_nodes = 1000;
  CHECK_THROWS_AS(converged_modes(NestedDisks{}, 2, 0.01, small), RefinementNeededError);
  RefinementOptions strict;
  strict.error_bound = 1e-9;
  CHECK_THROWS_AS(converged_spectrum(NestedDisks{}, 2, 0.05, strict), RefinementNeededError);
}

TEST_CASE("bad requests") {
  const DiscreteOperator op = assemble(rasterize(Rectangle{1.0, 1.0}, 0.25));
  CHECK_THROWS_AS(lowest_modes(op, 0), ValidationError);
  CHECK_THROWS_AS(lowest_modes(op, op.size() + 1), ValidationError);
  DomainMask empty = rasterize(Rectangle{1.0, 1.0}, 0.25);
  std::fill(empty.inside.begin(), empty.inside.end(), 0);
  CHECK_THROWS_AS(assemble(empty), DegenerateGeometryError);
}

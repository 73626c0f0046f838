#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "sist/analytic.hpp"
#include "sist/eigensolver.hpp"
#include "sist/oracles.hpp"
#include "sist/thermo.hpp"
#include "sist/weyl.hpp"

namespace sist::cli {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Check {
  std::string name;
  std::function<std::string(bool&)> body;  // sets ok, returns a detail line
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(7) << v;
  return os.str();
}

}  // namespace

bool run_validation(std::ostream& out) {
  constexpr double pi = std::numbers::pi;
  const std::vector<Check> checks = {
      {"unit square, k_1..k_6 at h = 1/200 within 0.5%",
       [&](bool& ok) {
         const Spectrum s = solve_on_grid(Rectangle{1.0, 1.0}, 6, 1.0 / 200.0).spectrum;
         const std::vector<double> ref = oracle::rectangle_bruteforce(1.0, 1.0, 6);
         double worst = 0.0;
         for (std::size_t i = 0; i < 6; ++i) worst = std::max(worst, rel(s.k[i], ref[i]));
         ok = worst <= 5e-3;
         return "max relative error " + fmt(worst);
       }},
      {"unit disk, k_1 at h = 1/200 within 0.5% of the first J_0 zero",
       [&](bool& ok) {
         const double j01 = oracle::bessel_j0_first_zero();
         const GridSpec g = make_grid(BoundingBox{-1.0, 1.0, -1.0, 1.0}, 1.0 / 200.0);
         const DomainMask m = rasterize([](Point p) { return p.x * p.x + p.y * p.y < 1.0; }, g);
         const double k1 = lowest_modes(assemble(m), 1).spectrum.k.front();
         ok = rel(k1, j01) <= 5e-3;
         return "k_1 = " + fmt(k1) + ", j_01 = " + fmt(j01);
       }},
      {"partitioned interval equals merged compartment ladders",
       [&](bool& ok) {
         std::mt19937_64 rng(7);
         std::uniform_real_distribution<double> Ld(1.0, 20.0), fd(0.05, 0.95);
         ok = true;
         for (int trial = 0; trial < 100 && ok; ++trial) {
           const double L = Ld(rng), l = fd(rng) * L;
           const Spectrum s = interval_partition_spectrum(L, l, 50);
           const std::vector<double> ref = oracle::interval_union_bruteforce(L, l, 50);
           for (std::size_t i = 0; i < 50; ++i) ok = ok && rel(s.k[i], ref[i]) <= 1e-14;
         }
         return std::string("100 random partitions, 50 levels each");
       }},
      {"area-preserving rectangle closed form equals enumeration",
       [&](bool& ok) {
         const Spectrum s = rectangle_spectrum(1.0, 1.7, 200);
         const std::vector<double> ref = oracle::rectangle_bruteforce(1.0 / 1.7, 1.7, 200);
         ok = true;
         for (std::size_t i = 0; i < 200; ++i) ok = ok && rel(s.k[i], ref[i]) <= 1e-14;
         return std::string("a = 1, b = 1.7, 200 levels");
       }},
      {"Weyl count within 2% of the exact count near 500 levels",
       [&](bool& ok) {
         const ShapeConfig sq = Rectangle{1.0, 1.0};
         const Spectrum s = analytic_spectrum(sq, 600);
         const double lambda = 0.5 * (s.k[499] + s.k[500]);
         const double exact = static_cast<double>(oracle::rectangle_count_below(1.0, 1.0, lambda));
         const double w = weyl_count(lambda, size_params(sq), 2);
         ok = level_count(s, lambda) == oracle::rectangle_count_below(1.0, 1.0, lambda) && rel(exact, w) <= 0.02;
         return "N = " + fmt(exact) + ", W = " + fmt(w);
       }},
      {"two-level system thermodynamics",
       [&](bool& ok) {
         const ThermoState st = boltzmann(explicit_spectrum({1.0, 2.0}), 1.5);
         const double z = std::exp(-1.0 / 1.5) + std::exp(-4.0 / 1.5);
         const double p1 = std::exp(-1.0 / 1.5) / z, p2 = 1.0 - p1;
         const double S = -p1 * std::log(p1) - p2 * std::log(p2);
         ok = rel(st.Z, z) <= 1e-14 && std::abs(st.S - S) <= 1e-14 && std::abs(st.F - (st.U - st.T * st.S)) <= 1e-12;
         return "Z = " + fmt(st.Z) + ", S = " + fmt(st.S);
       }},
      {"thermal wavelength of a box approaches its length",
       [&](bool& ok) {
         // L / lambda_th = 20: direct summation of the box ladder.
         const double L = 1.0, T = 4.0 * pi * 400.0;
         double z = 0.0;
         for (int n = 1; n < 100000; ++n) z += std::exp(-std::pow(n * pi / L, 2) / T);
         const double v = thermal_wavelength(T) * z, d = qbl_thickness(T);
         ok = v >= L - 2.0 * d - 1e-12 && v <= L;
         return "V_eff = " + fmt(v);
       }},
  };

  bool all = true;
  for (const auto& c : checks) {
    bool ok = false;
    std::string detail;
    try {
      detail = c.body(ok);
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
      ok = false;
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << " (" << detail << ")\n";
    all = all && ok;
  }
  out << (all ? "all checks passed" : "some checks failed") << '\n';
  return all;
}

}  // namespace sist::cli

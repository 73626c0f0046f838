#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <limits>
#include <vector>

#include "sist/field.hpp"
#include "sist/geometry.hpp"
#include "sist/spectrum.hpp"

namespace sist {

/// Five-point (three-point in 1D) finite-difference -Laplacian on the
/// interior nodes of a mask; Dirichlet nodes are simply absent.
struct DiscreteOperator {
  Eigen::SparseMatrix<double> matrix;
  GridSpec grid;
  std::vector<long> node_of_cell;    ///< grid index -> node, -1 outside
  std::vector<std::size_t> cell_of_node;

  std::size_t size() const { return cell_of_node.size(); }
};

DiscreteOperator assemble(const DomainMask& mask);

struct SolverOptions {
  /// Residual contract: ||A psi - mu psi|| <= tol * mu for every returned pair.
  double tol = 1e-7;
  /// Lanczos block width; 0 picks one from M.
  int block = 0;
  /// Operators up to this size are diagonalised densely.
  std::size_t dense_cutoff = 1200;
  /// Cap on the Krylov basis as a multiple of M (plus a fixed allowance).
  double basis_factor = 6.0;
  /// Relative gap below which grid levels count as one degenerate level.
  /// Lattice anisotropy splits exact multiplets by up to about 1e-3 at the
  /// spacings used here, far below physical splittings of interest.
  double degeneracy_tol = 1e-3;
  bool want_fields = false;
};

struct ModeSet {
  Spectrum spectrum;                ///< k_j = sqrt(mu_j), ascending
  std::vector<double> mu;           ///< discrete eigenvalues of the operator
  std::vector<double> residual;     ///< ||A psi - mu psi|| / mu
  std::vector<EigenField> fields;   ///< filled when want_fields
};

/// The M smallest eigenpairs of the operator. Throws ConvergenceError when
/// the Krylov basis cap is reached before the residual contract holds.
ModeSet lowest_modes(const DiscreteOperator& op, std::size_t M, const SolverOptions& opts = {});

/// Rasterize at spacing h and solve.
ModeSet solve_on_grid(const ShapeConfig& shape, std::size_t M, double h, const SolverOptions& opts = {});

struct RefinementOptions {
  SolverOptions solver;
  /// Largest tolerated |error estimate| / k; exceeding it throws.
  double error_bound = std::numeric_limits<double>::infinity();
  /// Node budget for the refined (h/2) solve.
  std::size_t max_nodes = 2'000'000;
};

/// Grid solves at h and h/2; the result is the h/2 solve (with fields when
/// requested) carrying per-level estimates |k_h - k_{h/2}| / 3. Throws
/// RefinementNeededError when an estimate exceeds the bound or the refined
/// grid exceeds the node budget.
ModeSet converged_modes(const ShapeConfig& shape, std::size_t M, double h, const RefinementOptions& opts = {});

/// Spectrum at spacing h/2 with a per-level Richardson estimate
/// |k_h - k_{h/2}| / 3. Families with closed forms are routed to them and
/// carry zero estimates. Throws RefinementNeededError when the estimate
/// exceeds the bound or the refined grid exceeds the node budget.
Spectrum converged_spectrum(const ShapeConfig& shape, std::size_t M, double h, const RefinementOptions& opts = {});

}  // namespace sist

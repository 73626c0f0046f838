#include "sist/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "sist/analytic.hpp"
#include "sist/errors.hpp"

namespace sist {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic start block: each entry hashes the node's grid coordinates
// and the column, so the start depends on geometry only.
MatrixXd start_block(const DiscreteOperator& op, int b) {
  const std::size_t n = op.size();
  MatrixXd Q(static_cast<Eigen::Index>(n), b);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t cell = op.cell_of_node[q];
    const auto i = static_cast<std::uint64_t>(cell % static_cast<std::size_t>(op.grid.nx));
    const auto j = static_cast<std::uint64_t>(cell / static_cast<std::size_t>(op.grid.nx));
    for (int c = 0; c < b; ++c) {
      const std::uint64_t key = splitmix64(i * 0x100000001B3ULL ^ splitmix64(j + 0x51ED27ULL * static_cast<std::uint64_t>(c + 1)));
      Q(static_cast<Eigen::Index>(q), c) = static_cast<double>(key >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
  }
  return Q;
}

MatrixXd orthonormal_columns(const MatrixXd& W) {
  Eigen::HouseholderQR<MatrixXd> qr(W);
  return qr.householderQ() * MatrixXd::Identity(W.rows(), W.cols());
}

// Removes the components along the first m columns of V (two classical
// Gram-Schmidt passes) and returns the accumulated coefficients.
MatrixXd project_out(const MatrixXd& V, Eigen::Index m, MatrixXd& W) {
  MatrixXd C = V.leftCols(m).transpose() * W;
  W.noalias() -= V.leftCols(m) * C;
  MatrixXd C2 = V.leftCols(m).transpose() * W;
  W.noalias() -= V.leftCols(m) * C2;
  return C + C2;
}

ModeSet pack_modes(const DiscreteOperator& op, const VectorXd& mu, const MatrixXd& vecs, std::size_t M,
                   const SolverOptions& opts) {
  ModeSet out;
  const auto n = static_cast<Eigen::Index>(op.size());
  const int dim = op.grid.dim();
  const double scale = 1.0 / std::sqrt(std::pow(op.grid.h, dim));

  out.mu.resize(M);
  out.residual.resize(M);
  out.spectrum.k.resize(M);
  for (std::size_t j = 0; j < M; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.mu[j] = mu(jj);
    out.spectrum.k[j] = std::sqrt(mu(jj));
    const VectorXd y = vecs.col(jj);
    const VectorXd r = op.matrix * y - mu(jj) * y;
    out.residual[j] = r.norm() / (y.norm() * mu(jj));
  }
  out.spectrum.error.assign(M, 0.0);
  out.spectrum.method = SpectrumMethod::Grid;
  out.spectrum.h = op.grid.h;
  out.spectrum.degeneracy_tol = opts.degeneracy_tol;

  if (opts.want_fields) {
    out.fields.reserve(M);
    for (std::size_t j = 0; j < M; ++j) {
      VectorXd y = vecs.col(static_cast<Eigen::Index>(j));
      y *= scale / y.norm();
      Eigen::Index big = 0;
      y.cwiseAbs().maxCoeff(&big);
      if (y(big) < 0.0) y = -y;
      EigenField f;
      f.k = out.spectrum.k[j];
      f.field.grid = op.grid;
      f.field.values.assign(op.grid.size(), 0.0);
      for (Eigen::Index q = 0; q < n; ++q) f.field.values[op.cell_of_node[static_cast<std::size_t>(q)]] = y(q);
      out.fields.push_back(std::move(f));
    }
  }
  return out;
}

ModeSet dense_modes(const DiscreteOperator& op, std::size_t M, const SolverOptions& opts) {
  const MatrixXd A = MatrixXd(op.matrix);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {});
  const auto m = static_cast<Eigen::Index>(M);
  return pack_modes(op, es.eigenvalues().head(m), es.eigenvectors().leftCols(m), M, opts);
}

ModeSet lanczos_modes(const DiscreteOperator& op, std::size_t M, const SolverOptions& opts) {
  const auto n = static_cast<Eigen::Index>(op.size());
  const auto want = static_cast<Eigen::Index>(M);
  const int b = opts.block > 0 ? opts.block : std::clamp(static_cast<int>(M / 10), 4, 16);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(op.matrix);
  if (ldlt.info() != Eigen::Success) throw ConvergenceError("sparse factorisation failed", {});

  const Eigen::Index cap = std::min<Eigen::Index>(
      n, static_cast<Eigen::Index>(opts.basis_factor * static_cast<double>(M)) + 40 * b);
  MatrixXd V(n, std::min<Eigen::Index>(cap, 3 * want + 8 * b) + b);
  MatrixXd H = MatrixXd::Zero(V.cols(), V.cols());

  V.leftCols(b) = orthonormal_columns(start_block(op, b));
  Eigen::Index m = b;  // columns of V in use

  // Ritz tolerance on the shift-inverted problem; tightened when the true
  // residuals of the original operator still fail the contract.
  double ritz_tol = opts.tol;
  Eigen::Index next_check = std::min<Eigen::Index>(want + 2 * b, cap);
  std::vector<double> last_residuals;

  for (;;) {
    // Expand by one block.
    MatrixXd W = ldlt.solve(V.middleCols(m - b, b));
    const MatrixXd C = project_out(V, m, W);
    H.block(0, m - b, m, b) = C;

    Eigen::HouseholderQR<MatrixXd> qr(W);
    MatrixXd Qn = qr.householderQ() * MatrixXd::Identity(W.rows(), b);
    // Rank-deficient W leaves Householder directions that may overlap V.
    const double rmax = qr.matrixQR().diagonal().cwiseAbs().maxCoeff();
    if (qr.matrixQR().diagonal().cwiseAbs().minCoeff() < 1e-8 * rmax) {
      project_out(V, m, Qn);
      Qn = orthonormal_columns(Qn);
    }
    const MatrixXd B = Qn.transpose() * W;

    const bool full = m + b > cap || m + b > n;
    if (!full) {
      if (m + b > V.cols()) {
        const Eigen::Index grow = std::min<Eigen::Index>(cap + b, V.cols() + V.cols() / 2 + b);
        V.conservativeResize(Eigen::NoChange, grow);
        MatrixXd H2 = MatrixXd::Zero(grow, grow);
        H2.topLeftCorner(H.rows(), H.cols()) = H;
        H.swap(H2);
      }
      V.middleCols(m, b) = Qn;
      H.block(m, m - b, b, b) = B;
      m += b;
    }

    const Eigen::Index k = full ? m : m - b;  // columns with complete projections
    if (k < next_check && !full) continue;

    MatrixXd T = H.topLeftCorner(k, k);
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
    // Largest Ritz values of A^{-1} are the smallest eigenvalues of A.
    const VectorXd theta = es.eigenvalues().reverse();
    const MatrixXd S = es.eigenvectors().rowwise().reverse();
    const MatrixXd coupling = full ? MatrixXd::Zero(b, b) : MatrixXd(H.block(k, k - b, b, b));

    bool ritz_ok = k >= want;
    for (Eigen::Index j = 0; j < std::min(want, k) && ritz_ok; ++j) {
      const double est = (coupling * S.block(k - b, j, b, 1)).norm();
      if (est > ritz_tol * std::abs(theta(j))) ritz_ok = false;
    }

    if (ritz_ok || full) {
      const MatrixXd Y = V.leftCols(k) * S.leftCols(want);
      VectorXd mu(want);
      for (Eigen::Index j = 0; j < want; ++j) mu(j) = 1.0 / theta(j);
      ModeSet res = pack_modes(op, mu, Y, M, opts);
      const bool ok = std::all_of(res.residual.begin(), res.residual.end(), [&](double r) { return r <= opts.tol; });
      if (ok) return res;
      last_residuals = res.residual;
      if (full)
        throw ConvergenceError("Lanczos basis cap of " + std::to_string(cap) + " vectors reached before the residual contract held",
                               last_residuals);
      ritz_tol *= 1e-2;
    }
    next_check = std::min<Eigen::Index>(cap, k + std::max<Eigen::Index>(4 * b, k / 5));
  }
}

}  // namespace

DiscreteOperator assemble(const DomainMask& mask) {
  const GridSpec& g = mask.grid;
  DiscreteOperator op;
  op.grid = g;
  op.node_of_cell.assign(g.size(), -1);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (mask.inside[c]) {
      op.node_of_cell[c] = static_cast<long>(op.cell_of_node.size());
      op.cell_of_node.push_back(c);
    }
  }
  const std::size_t n = op.cell_of_node.size();
  if (n == 0) throw DegenerateGeometryError("cannot assemble an operator on an empty mask");

  const int dim = g.dim();
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n * static_cast<std::size_t>(2 * dim + 1));
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t c = op.cell_of_node[q];
    const int i = static_cast<int>(c % static_cast<std::size_t>(g.nx));
    const int j = static_cast<int>(c / static_cast<std::size_t>(g.nx));
    const auto row = static_cast<int>(q);
    trip.emplace_back(row, row, 2.0 * dim * inv_h2);
    auto link = [&](int ii, int jj) {
      if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) return;
      const long other = op.node_of_cell[g.index(ii, jj)];
      if (other >= 0) trip.emplace_back(row, static_cast<int>(other), -inv_h2);
    };
    link(i - 1, j);
    link(i + 1, j);
    if (dim == 2) {
      link(i, j - 1);
      link(i, j + 1);
    }
  }
  op.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

ModeSet lowest_modes(const DiscreteOperator& op, std::size_t M, const SolverOptions& opts) {
  if (M < 1) throw ValidationError("requested mode count M must be >= 1");
  if (M > op.size())
    throw ValidationError("requested " + std::to_string(M) + " modes but the operator has only " +
                          std::to_string(op.size()) + " nodes");
  if (!(opts.tol > 0.0)) throw ValidationError("solver tolerance must be positive");
  if (!(opts.degeneracy_tol >= 0.0 && opts.degeneracy_tol < 1.0)) throw ValidationError("degeneracy tolerance must lie in [0, 1)");
  if (op.size() <= opts.dense_cutoff) return dense_modes(op, M, opts);
  return lanczos_modes(op, M, opts);
}

ModeSet solve_on_grid(const ShapeConfig& shape, std::size_t M, double h, const SolverOptions& opts) {
  ModeSet res = lowest_modes(assemble(rasterize(shape, h)), M, opts);
  res.spectrum.shape = shape;
  return res;
}

ModeSet converged_modes(const ShapeConfig& shape, std::size_t M, double h, const RefinementOptions& opts) {
  const GridSpec coarse = make_grid(shape, h);
  const GridSpec fine = coarse.refined();
  if (fine.size() > opts.max_nodes)
    throw RefinementNeededError("refined grid of " + std::to_string(fine.size()) + " cells exceeds the node budget of " +
                                std::to_string(opts.max_nodes));

  SolverOptions coarse_opts = opts.solver;
  coarse_opts.want_fields = false;
  const ModeSet c = lowest_modes(assemble(rasterize(shape, coarse)), M, coarse_opts);
  ModeSet f = lowest_modes(assemble(rasterize(shape, fine)), M, opts.solver);
  f.spectrum.shape = shape;
  for (std::size_t i = 0; i < M; ++i) {
    f.spectrum.error[i] = std::abs(c.spectrum.k[i] - f.spectrum.k[i]) / 3.0;
    if (f.spectrum.error[i] > opts.error_bound * f.spectrum.k[i])
      throw RefinementNeededError("level " + std::to_string(i + 1) + " error estimate " +
                                  std::to_string(f.spectrum.error[i] / f.spectrum.k[i]) + " exceeds the bound " +
                                  std::to_string(opts.error_bound) + "; refine h");
  }
  return f;
}

Spectrum converged_spectrum(const ShapeConfig& shape, std::size_t M, double h, const RefinementOptions& opts) {
  if (has_analytic_spectrum(shape)) return analytic_spectrum(shape, static_cast<int>(M));
  RefinementOptions o = opts;
  o.solver.want_fields = false;
  return converged_modes(shape, M, h, o).spectrum;
}

}  // namespace sist

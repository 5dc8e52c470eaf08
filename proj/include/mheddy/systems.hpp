// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_SYSTEMS_HPP
#define MHEDDY_SYSTEMS_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "mheddy/edge_fem.hpp"
#include "mheddy/harmonics.hpp"
#include "mheddy/mesh.hpp"

namespace mheddy
{

// Matrices on the free (interior) DOFs shared by all mode systems.
struct SystemMatrices
{
  SparseSym mass;
  SparseSym weighted_mass;
  SparseSym stiffness;
  SparseRect gradient;  // interior edges x interior nodes

  static SystemMatrices assemble(const TetMesh &mesh, const Coefficients &coeff,
                                 const DofMap &dofs);
};

enum class SystemKind
{
  forward,
  forward0,
  ocp,
  ocp0
};

const char *to_string(SystemKind kind);

struct ControlParams
{
  double alpha = 1.0;

  void validate() const;
};

// scale * matrix placed at block (row, col).
struct BlockTerm
{
  int row;
  int col;
  double scale;
  const SparseSym *matrix;
};

// Preconditioner block scale * (K + shift * M_sigma).
struct PrecondBlock
{
  double scale;
  double shift;
};

struct ModeSystem
{
  SystemKind kind = SystemKind::forward;
  int k = 0;
  double kw = 0.0;
  double alpha = 1.0;
  int num_blocks = 1;
  Eigen::Index block_size = 0;
  std::vector<BlockTerm> terms;
  std::vector<PrecondBlock> precond;
  Vector rhs;
  const SystemMatrices *matrices = nullptr;

  Eigen::Index size() const { return num_blocks * block_size; }
  Vector apply(const Vector &x) const;
  SparseSym assemble_operator() const;
};

// Forward mode k >= 1. The symmetric form [[kw Ms, -K], [-K, -kw Ms]] acts on (-y^s, y^c)
// with right-hand side (-u^c, u^s); solve() maps back to (y^c, y^s).
ModeSystem build_forward(int k, const SystemMatrices &mats, const PeriodSpec &period,
                         const Vector &u_cos, const Vector &u_sin);

// Mean mode K y0 = u0, singular on gradients.
ModeSystem build_forward0(const SystemMatrices &mats, const Vector &u0);

// Optimality system for mode k >= 1 on (y^c, y^s, p^c, p^s).
ModeSystem build_ocp(int k, const SystemMatrices &mats, const ControlParams &control,
                     const PeriodSpec &period, const Vector &yd_cos, const Vector &yd_sin);

// Mean mode [[M, -K], [-K, -M/alpha]] on (y0, p0).
ModeSystem build_ocp0(const SystemMatrices &mats, const ControlParams &control,
                      const Vector &yd0);

struct SolverConfig
{
  double tol = 1e-10;
  int maxit = 2000;
  // Relative size of the gradient component tolerated in a mean-mode load.
  double gauge_tol = 1e-9;
  bool record_history = false;
};

struct SolveStats
{
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  bool converged = false;
  std::vector<double> history;
};

using LinearOp = std::function<Vector(const Vector &)>;

// Preconditioned MINRES. The relative residual is measured in the P^{-1} norm.
Vector minres(const LinearOp &apply_a, const LinearOp &apply_pinv, const Vector &b, double tol,
              int maxit, SolveStats &stats, bool record_history = false);

// Exact block-diagonal preconditioner: one sparse Cholesky factorization per distinct
// shift.
class BlockPreconditioner
{
public:
  explicit BlockPreconditioner(const ModeSystem &system);
  ~BlockPreconditioner();

  Vector apply(const Vector &r) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

//
// Gauge for the mean forward mode: removes the discrete gradient component of loads
// (Euclidean projection onto ker G^T) and of solutions (M_sigma-orthogonal projection).
//
class GradientGauge
{
public:
  GradientGauge(const SparseRect &gradient, const SparseSym &weighted_mass);
  ~GradientGauge();

  double inconsistency(const Vector &b) const;
  Vector project_rhs(const Vector &b) const;
  Vector project_solution(const Vector &y) const;
  // Norm of the nodal coefficients of the M_sigma-projection of y onto gradients.
  double gradient_component(const Vector &y) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ModeSolution
{
  int k = 0;
  SystemKind kind = SystemKind::forward;
  // forward: (y^c, y^s); forward0: (y0); ocp: (y^c, y^s, p^c, p^s); ocp0: (y0, p0)
  std::vector<Vector> fields;
  SolveStats stats;
  double gauge_inconsistency = 0.0;
};

// Throws SolverError when MINRES does not reach the tolerance, GaugeError when a mean-mode
// load has a gradient component above the gauge tolerance.
ModeSolution solve(const ModeSystem &system, const SolverConfig &config);

// Packages mode solutions 0..N; `field` selects the state (0) or adjoint (1).
FourierField reconstruct(const std::vector<ModeSolution> &solutions, int truncation,
                         int field = 0);

void write_trace(std::ostream &os, const SolveStats &stats);

}  // namespace mheddy

#endif  // MHEDDY_SYSTEMS_HPP

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/systems.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <Eigen/SparseCholesky>

namespace mheddy
{

SystemMatrices SystemMatrices::assemble(const TetMesh &mesh, const Coefficients &coeff,
                                        const DofMap &dofs)
{
  SystemMatrices m;
  m.mass = mheddy::assemble(mesh, coeff, MatrixKind::mass, dofs);
  m.weighted_mass = mheddy::assemble(mesh, coeff, MatrixKind::weighted_mass, dofs);
  m.stiffness = mheddy::assemble(mesh, coeff, MatrixKind::stiffness, dofs);
  m.gradient = gradient_incidence_interior(mesh);
  if (m.gradient.rows() != dofs.size())
  {
    throw std::invalid_argument("SystemMatrices: DofMap must constrain the boundary edges");
  }
  return m;
}

const char *to_string(SystemKind kind)
{
  switch (kind)
  {
    case SystemKind::forward:
      return "forward";
    case SystemKind::forward0:
      return "forward0";
    case SystemKind::ocp:
      return "ocp";
    case SystemKind::ocp0:
      return "ocp0";
  }
  return "?";
}

void ControlParams::validate() const
{
  if (!(alpha > 0.0) || !std::isfinite(alpha))
  {
    throw ConfigError("alpha must be positive");
  }
}

Vector ModeSystem::apply(const Vector &x) const
{
  Vector y = Vector::Zero(size());
  for (const auto &t : terms)
  {
    y.segment(t.row * block_size, block_size).noalias() +=
        t.scale * (*t.matrix * x.segment(t.col * block_size, block_size));
  }
  return y;
}

SparseSym ModeSystem::assemble_operator() const
{
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto &t : terms)
  {
    for (int r = 0; r < t.matrix->outerSize(); r++)
    {
      for (SparseSym::InnerIterator it(*t.matrix, r); it; ++it)
      {
        trips.emplace_back(t.row * block_size + it.row(), t.col * block_size + it.col(),
                           t.scale * it.value());
      }
    }
  }
  SparseSym a(size(), size());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

namespace
{

void check_rhs(const SystemMatrices &mats, const Vector &v)
{
  if (v.size() != mats.mass.rows())
  {
    throw std::invalid_argument("mode system: right-hand side dimension mismatch");
  }
}

}  // namespace

ModeSystem build_forward(int k, const SystemMatrices &mats, const PeriodSpec &period,
                         const Vector &u_cos, const Vector &u_sin)
{
  if (k < 1)
  {
    throw std::invalid_argument("build_forward: k >= 1 required, use build_forward0");
  }
  check_rhs(mats, u_cos);
  check_rhs(mats, u_sin);
  ModeSystem s;
  s.kind = SystemKind::forward;
  s.k = k;
  s.kw = k * period.omega();
  s.num_blocks = 2;
  s.block_size = mats.mass.rows();
  s.matrices = &mats;
  s.terms = {{0, 0, s.kw, &mats.weighted_mass},
             {0, 1, -1.0, &mats.stiffness},
             {1, 0, -1.0, &mats.stiffness},
             {1, 1, -s.kw, &mats.weighted_mass}};
  s.precond = {{1.0, s.kw}, {1.0, s.kw}};
  s.rhs.resize(s.size());
  s.rhs << -u_cos, u_sin;
  return s;
}

ModeSystem build_forward0(const SystemMatrices &mats, const Vector &u0)
{
  check_rhs(mats, u0);
  ModeSystem s;
  s.kind = SystemKind::forward0;
  s.num_blocks = 1;
  s.block_size = mats.mass.rows();
  s.matrices = &mats;
  s.terms = {{0, 0, 1.0, &mats.stiffness}};
  s.precond = {{1.0, 1.0}};
  s.rhs = u0;
  return s;
}

ModeSystem build_ocp(int k, const SystemMatrices &mats, const ControlParams &control,
                     const PeriodSpec &period, const Vector &yd_cos, const Vector &yd_sin)
{
  if (k < 1)
  {
    throw std::invalid_argument("build_ocp: k >= 1 required, use build_ocp0");
  }
  control.validate();
  check_rhs(mats, yd_cos);
  check_rhs(mats, yd_sin);
  ModeSystem s;
  s.kind = SystemKind::ocp;
  s.k = k;
  s.kw = k * period.omega();
  s.alpha = control.alpha;
  s.num_blocks = 4;
  s.block_size = mats.mass.rows();
  s.matrices = &mats;
  const double ia = 1.0 / control.alpha;
  const SparseSym *M = &mats.mass, *K = &mats.stiffness, *Ms = &mats.weighted_mass;
  s.terms = {{0, 0, 1.0, M},   {0, 2, -1.0, K},  {0, 3, s.kw, Ms},
             {1, 1, 1.0, M},   {1, 2, -s.kw, Ms}, {1, 3, -1.0, K},
             {2, 0, -1.0, K},  {2, 1, -s.kw, Ms}, {2, 2, -ia, M},
             {3, 0, s.kw, Ms}, {3, 1, -1.0, K},  {3, 3, -ia, M}};
  s.precond = {{1.0, s.kw}, {1.0, s.kw}, {ia, s.kw}, {ia, s.kw}};
  s.rhs = Vector::Zero(s.size());
  s.rhs.segment(0, s.block_size) = yd_cos;
  s.rhs.segment(s.block_size, s.block_size) = yd_sin;
  return s;
}

ModeSystem build_ocp0(const SystemMatrices &mats, const ControlParams &control, const Vector &yd0)
{
  control.validate();
  check_rhs(mats, yd0);
  ModeSystem s;
  s.kind = SystemKind::ocp0;
  s.alpha = control.alpha;
  s.num_blocks = 2;
  s.block_size = mats.mass.rows();
  s.matrices = &mats;
  const double ia = 1.0 / control.alpha;
  s.terms = {{0, 0, 1.0, &mats.mass},
             {0, 1, -1.0, &mats.stiffness},
             {1, 0, -1.0, &mats.stiffness},
             {1, 1, -ia, &mats.mass}};
  s.precond = {{1.0, 1.0}, {ia, 1.0}};
  s.rhs = Vector::Zero(s.size());
  s.rhs.segment(0, s.block_size) = yd0;
  return s;
}

Vector minres(const LinearOp &apply_a, const LinearOp &apply_pinv, const Vector &b, double tol,
              int maxit, SolveStats &stats, bool record_history)
{
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = b.size();
  Vector x = Vector::Zero(n);
  stats = SolveStats{};
  auto finish = [&]
  {
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Vector r1 = b;
  Vector y = apply_pinv(b);
  const double b_pb = b.dot(y);
  if (b_pb < 0.0)
  {
    throw SolverError("minres: preconditioner is not positive definite");
  }
  const double beta1 = std::sqrt(b_pb);
  if (beta1 == 0.0)
  {
    stats.converged = true;
    finish();
    return x;
  }

  Vector r2 = r1;
  Vector w = Vector::Zero(n), w1(n), w2 = Vector::Zero(n), v(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= maxit; itn++)
  {
    v = y / beta;
    y = apply_a(v);
    if (itn >= 2)
    {
      y -= (beta / oldb) * r1;
    }
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    y = apply_pinv(r2);
    oldb = beta;
    const double r2y = r2.dot(y);
    if (r2y < 0.0)
    {
      throw SolverError("minres: preconditioner is not positive definite");
    }
    beta = std::sqrt(r2y);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar *= sn;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    stats.iterations = itn;
    stats.residual = phibar / beta1;
    if (record_history)
    {
      stats.history.push_back(stats.residual);
    }
    if (stats.residual <= tol)
    {
      stats.converged = true;
      break;
    }
    if (beta <= eps * beta1)
    {
      // Invariant Krylov space without reaching the tolerance.
      break;
    }
  }
  finish();
  return x;
}

struct BlockPreconditioner::Impl
{
  using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;
  std::map<double, std::unique_ptr<Factor>> factors;
  std::vector<PrecondBlock> blocks;
  std::vector<const Factor *> block_factor;
  Eigen::Index block_size = 0;
};

BlockPreconditioner::BlockPreconditioner(const ModeSystem &system) : impl_(std::make_unique<Impl>())
{
  impl_->blocks = system.precond;
  impl_->block_size = system.block_size;
  const SystemMatrices &mats = *system.matrices;
  for (const auto &pb : system.precond)
  {
    auto it = impl_->factors.find(pb.shift);
    if (it == impl_->factors.end())
    {
      Eigen::SparseMatrix<double> p = mats.stiffness + pb.shift * mats.weighted_mass;
      auto f = std::make_unique<Impl::Factor>(p);
      if (f->info() != Eigen::Success)
      {
        throw SolverError("preconditioner: Cholesky factorization failed");
      }
      it = impl_->factors.emplace(pb.shift, std::move(f)).first;
    }
    impl_->block_factor.push_back(it->second.get());
  }
}

BlockPreconditioner::~BlockPreconditioner() = default;

Vector BlockPreconditioner::apply(const Vector &r) const
{
  const Eigen::Index m = impl_->block_size;
  Vector z(r.size());
  for (std::size_t i = 0; i < impl_->blocks.size(); i++)
  {
    z.segment(i * m, m) = impl_->block_factor[i]->solve(r.segment(i * m, m)) / impl_->blocks[i].scale;
  }
  return z;
}

struct GradientGauge::Impl
{
  SparseRect g;
  SparseSym ms;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> laplace;   // G^T G
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> weighted;  // G^T Ms G
};

GradientGauge::GradientGauge(const SparseRect &gradient, const SparseSym &weighted_mass)
    : impl_(std::make_unique<Impl>())
{
  impl_->g = gradient;
  impl_->ms = weighted_mass;
  if (gradient.cols() == 0)
  {
    return;
  }
  const Eigen::SparseMatrix<double> gc = gradient;
  const Eigen::SparseMatrix<double> ms = weighted_mass;
  impl_->laplace.compute(gc.transpose() * gc);
  impl_->weighted.compute(gc.transpose() * ms * gc);
  if (impl_->laplace.info() != Eigen::Success || impl_->weighted.info() != Eigen::Success)
  {
    throw SolverError("gauge: factorization failed");
  }
}

GradientGauge::~GradientGauge() = default;

Vector GradientGauge::project_rhs(const Vector &b) const
{
  if (impl_->g.cols() == 0)
  {
    return b;
  }
  const Vector psi = impl_->laplace.solve(impl_->g.transpose() * b);
  return b - impl_->g * psi;
}

double GradientGauge::inconsistency(const Vector &b) const
{
  const double nb = b.norm();
  if (nb == 0.0)
  {
    return 0.0;
  }
  return (b - project_rhs(b)).norm() / nb;
}

Vector GradientGauge::project_solution(const Vector &y) const
{
  if (impl_->g.cols() == 0)
  {
    return y;
  }
  const Vector psi = impl_->weighted.solve(impl_->g.transpose() * (impl_->ms * y));
  return y - impl_->g * psi;
}

double GradientGauge::gradient_component(const Vector &y) const
{
  if (impl_->g.cols() == 0)
  {
    return 0.0;
  }
  return impl_->weighted.solve(impl_->g.transpose() * (impl_->ms * y)).norm();
}

ModeSolution solve(const ModeSystem &system, const SolverConfig &config)
{
  if (!(config.tol > 0.0) || config.maxit < 1)
  {
    throw ConfigError("solver: tolerance and iteration limit must be positive");
  }
  ModeSolution sol;
  sol.k = system.k;
  sol.kind = system.kind;
  const BlockPreconditioner prec(system);
  const LinearOp apply_a = [&](const Vector &x) { return system.apply(x); };
  const LinearOp apply_p = [&](const Vector &r) { return prec.apply(r); };
  const Eigen::Index m = system.block_size;

  if (system.kind == SystemKind::forward0)
  {
    const SystemMatrices &mats = *system.matrices;
    const GradientGauge gauge(mats.gradient, mats.weighted_mass);
    sol.gauge_inconsistency = gauge.inconsistency(system.rhs);
    if (sol.gauge_inconsistency > config.gauge_tol)
    {
      throw GaugeError("mean mode load has a gradient component of relative size " +
                       std::to_string(sol.gauge_inconsistency));
    }
    const Vector b = gauge.project_rhs(system.rhs);
    Vector y = minres(apply_a, apply_p, b, config.tol, config.maxit, sol.stats,
                      config.record_history);
    sol.fields = {gauge.project_solution(y)};
  }
  else
  {
    const Vector x = minres(apply_a, apply_p, system.rhs, config.tol, config.maxit, sol.stats,
                            config.record_history);
    for (int i = 0; i < system.num_blocks; i++)
    {
      sol.fields.push_back(x.segment(i * m, m));
    }
    if (system.kind == SystemKind::forward)
    {
      // (x0, x1) = (-y^s, y^c)
      sol.fields = {sol.fields[1], -sol.fields[0]};
    }
  }
  if (!sol.stats.converged)
  {
    throw SolverError(std::string("MINRES did not converge for ") + to_string(system.kind) +
                      " mode " + std::to_string(system.k) + " (relative residual " +
                      std::to_string(sol.stats.residual) + " after " +
                      std::to_string(sol.stats.iterations) + " iterations)");
  }
  return sol;
}

FourierField reconstruct(const std::vector<ModeSolution> &solutions, int truncation, int field)
{
  std::vector<const ModeSolution *> found(truncation + 1, nullptr);
  for (const auto &s : solutions)
  {
    if (s.k >= 0 && s.k <= truncation)
    {
      found[s.k] = &s;
    }
  }
  FourierField f;
  for (int k = 0; k <= truncation; k++)
  {
    const ModeSolution *s = found[k];
    if (!s)
    {
      throw std::invalid_argument("reconstruct: missing mode " + std::to_string(k));
    }
    const std::size_t per = (k == 0) ? 1 : 2;
    const std::size_t off = field * per;
    if (s->fields.size() < off + per)
    {
      throw std::invalid_argument("reconstruct: mode " + std::to_string(k) +
                                  " has no requested field");
    }
    if (k == 0)
    {
      f.mode0 = s->fields[off];
    }
    else
    {
      f.modes.push_back({s->fields[off], s->fields[off + 1]});
    }
  }
  return f;
}

void write_trace(std::ostream &os, const SolveStats &stats)
{
  os << "iteration,residual\n";
  os.precision(10);
  for (std::size_t i = 0; i < stats.history.size(); i++)
  {
    os << i + 1 << "," << stats.history[i] << "\n";
  }
}

}  // namespace mheddy

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include <Eigen/SparseCholesky>

#include "mheddy/parallel.hpp"

namespace mheddy
{

const char *const kEfficiencyNote =
    "i_eff = majorant_sq / error_sq, where error_sq is the squared space-time seminorm of the "
    "error (state and adjoint summed for the optimality system)";

double unit_cube_friedrichs()
{
  return 1.0 / (std::sqrt(2.0) * std::numbers::pi);
}

StabilityConstants stability_constants(const MaterialBounds &b, double alpha, double friedrichs,
                                       ConstantsContext context)
{
  if (!(b.sigma_min > 0.0 && b.nu_min > 0.0 && b.sigma_max >= b.sigma_min &&
        b.nu_max >= b.nu_min && friedrichs > 0.0 && alpha > 0.0))
  {
    throw ConfigError("stability_constants: inputs must be positive");
  }
  StabilityConstants c;
  c.context = context;
  c.friedrichs = friedrichs;
  const double cf2 = friedrichs * friedrichs;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (context)
  {
    case ConstantsContext::forward_seminorm:
      c.lower = inv_sqrt2 * std::min(b.nu_min, b.sigma_min);
      c.upper = std::max(b.sigma_max, b.nu_max);
      break;
    case ConstantsContext::forward_norm:
      c.lower = inv_sqrt2 * std::min(b.nu_min / (1.0 + cf2), b.sigma_min);
      c.upper = std::max(b.sigma_max, b.nu_max);
      break;
    case ConstantsContext::ocp_norm:
      c.lower = std::pow(1.0 + 2.0 * std::max(alpha, 1.0 / alpha), -0.5) *
                std::min({1.0 / std::sqrt(alpha), b.nu_min, b.sigma_min}) *
                std::min(std::sqrt(alpha), 1.0 / std::sqrt(alpha));
      c.upper = std::max({1.0, 1.0 / alpha, b.nu_max, b.sigma_max});
      break;
    case ConstantsContext::ocp_seminorm:
      c.lower = inv_sqrt2 * std::min(b.nu_min, b.sigma_min) * std::min(alpha, 1.0 / alpha);
      c.upper = std::max(1.0, 1.0 + cf2) * std::max({1.0, 1.0 / alpha, b.nu_max, b.sigma_max});
      break;
  }
  return c;
}

double clamp_beta(double beta)
{
  return std::clamp(beta, kBetaMin, kBetaMax);
}

namespace
{

// sqrt(num / den) with the degenerate cases resolved toward the clamp range.
double ratio_sqrt(double num, double den)
{
  if (den <= 0.0)
  {
    return num <= 0.0 ? 1.0 : kBetaMax;
  }
  return clamp_beta(std::sqrt(std::max(num, 0.0) / den));
}

}  // namespace

double beta_optimal(double a, double b)
{
  if (a < 0.0 || b < 0.0)
  {
    throw std::invalid_argument("beta_optimal: negative residual sum");
  }
  if (a == 0.0 && b == 0.0)
  {
    throw std::invalid_argument("beta_optimal: both sums vanish, the majorant is zero");
  }
  return ratio_sqrt(b, a);
}

OcpBetas beta_optimal_ocp(const OcpSums &s, double friedrichs)
{
  const double cf2 = friedrichs * friedrichs;
  OcpBetas b;
  b.b2 = ratio_sqrt(s.r2, cf2 * s.r1);
  b.b3 = ratio_sqrt(s.r4, cf2 * s.r3);
  const double x = cf2 * (1.0 + b.b2) * s.r1 + (1.0 + b.b2) / b.b2 * s.r2;
  const double y = cf2 * (1.0 + b.b3) * s.r3 + (1.0 + b.b3) / b.b3 * s.r4;
  b.b1 = ratio_sqrt(y, x);
  return b;
}

double majorant_forward(const ForwardSums &sums, const StabilityConstants &constants, double beta,
                        double remainder, MajorantForm form)
{
  const double r1 = sums.r1 + remainder;
  const double cf = constants.friedrichs;
  const double c2 = constants.lower * constants.lower;
  switch (form)
  {
    case MajorantForm::linear_seminorm:
    {
      const double m = cf * std::sqrt(r1) + std::sqrt(sums.r2);
      return m * m / c2;
    }
    case MajorantForm::quadratic:
      if (!(beta > 0.0))
      {
        throw std::invalid_argument("majorant_forward: beta must be positive");
      }
      return (cf * cf * (1.0 + beta) * r1 + (1.0 + beta) / beta * sums.r2) / c2;
    case MajorantForm::norm:
      return (r1 + sums.r2) / c2;
  }
  return 0.0;
}

namespace
{

std::array<double, 4> ocp_weights(const OcpBetas &b, double cf, double lower)
{
  const double cf2 = cf * cf;
  const double c2 = lower * lower;
  return {cf2 * (1.0 + b.b1) * (1.0 + b.b2) / c2, (1.0 + b.b1) * (1.0 + b.b2) / b.b2 / c2,
          cf2 * (1.0 + b.b1) * (1.0 + b.b3) / b.b1 / c2,
          (1.0 + b.b1) * (1.0 + b.b3) / (b.b1 * b.b3) / c2};
}

}  // namespace

double majorant_ocp(const OcpSums &sums, const StabilityConstants &constants,
                    const OcpBetas &betas, double remainder)
{
  if (!(betas.b1 > 0.0 && betas.b2 > 0.0 && betas.b3 > 0.0))
  {
    throw std::invalid_argument("majorant_ocp: Young parameters must be positive");
  }
  const auto w = ocp_weights(betas, constants.friedrichs, constants.lower);
  return w[0] * (sums.r1 + remainder) + w[1] * sums.r2 + w[2] * sums.r3 + w[3] * sums.r4;
}

double efficiency_index(double majorant_sq, double error_sq)
{
  if (!(error_sq > 0.0))
  {
    throw std::invalid_argument("efficiency_index: error quantity must be positive");
  }
  return majorant_sq / error_sq;
}

EstimatorContext EstimatorContext::make(const EdgeSpace &space, const Coefficients &coeff,
                                        const PeriodSpec &period,
                                        const StabilityConstants &constants, double alpha)
{
  EstimatorContext ctx;
  ctx.space = &space;
  ctx.coeff = &coeff;
  ctx.period = period;
  ctx.alpha = alpha;
  ctx.constants = constants;
  const DofMap all = DofMap::unconstrained(space.mesh());
  ctx.mass = assemble(space.mesh(), coeff, MatrixKind::mass, all);
  ctx.curl_curl = assemble(space.mesh(), coeff, MatrixKind::curl_curl, all);
  return ctx;
}

namespace
{

//
// One cosine or sine component of one flux variable in one mode. The flux enters two
// residuals: ||h - curl q|| (slot curl_slot) and ||q - f|| (slot flux_slot).
//
struct FluxProblem
{
  int mode_index = 0;
  int component = 0;  // 0 cosine, 1 sine
  int variable = 0;   // 0 tau, 1 rho
  double time_weight = 1.0;
  int curl_slot = 0;
  int flux_slot = 1;
  PointField curl_target;
  PointField flux_target;
  Vector curl_load;
  Vector flux_load;
};

// nu curl v, constant per tet.
PointField nu_curl(const EstimatorContext &ctx, const Vector &v)
{
  const EdgeSpace &space = *ctx.space;
  const auto &nu = ctx.coeff->nu;
  return [&space, &v, &nu](const PointContext &p) { return nu[p.tet] * space.curl(v, p.tet); };
}

void finish_problem(const EstimatorContext &ctx, FluxProblem &fp)
{
  const DofMap all = DofMap::unconstrained(ctx.space->mesh());
  fp.curl_load = assemble_curl_load(*ctx.space, all, fp.curl_target);
  fp.flux_load = assemble_load(*ctx.space, all, fp.flux_target);
}

std::vector<FluxProblem> forward_problems(const EstimatorContext &ctx,
                                          const std::vector<ForwardModeData> &modes, bool loads)
{
  const EdgeSpace &space = *ctx.space;
  const auto &sigma = ctx.coeff->sigma;
  std::vector<FluxProblem> out;
  for (std::size_t i = 0; i < modes.size(); i++)
  {
    const ForwardModeData &m = modes[i];
    const double kw = m.k * ctx.period.omega();
    const double tw = time_weight(m.k, ctx.period);
    FluxProblem fc;
    fc.mode_index = static_cast<int>(i);
    fc.time_weight = tw;
    fc.curl_slot = 0;
    fc.flux_slot = 1;
    if (m.k == 0)
    {
      fc.curl_target = m.u_cos;
      fc.flux_target = nu_curl(ctx, m.eta_cos);
      out.push_back(std::move(fc));
      continue;
    }
    FluxProblem fs = fc;
    fs.component = 1;
    // R1 = u + kw sigma eta^perp - curl tau, with eta^perp = (-eta^s, eta^c).
    fc.curl_target = [&space, &sigma, &m, kw](const PointContext &p)
    { return Vec3(m.u_cos(p) - kw * sigma[p.tet] * space.value(m.eta_sin, p.tet, p.bary)); };
    fs.curl_target = [&space, &sigma, &m, kw](const PointContext &p)
    { return Vec3(m.u_sin(p) + kw * sigma[p.tet] * space.value(m.eta_cos, p.tet, p.bary)); };
    fc.flux_target = nu_curl(ctx, m.eta_cos);
    fs.flux_target = nu_curl(ctx, m.eta_sin);
    out.push_back(std::move(fc));
    out.push_back(std::move(fs));
  }
  if (loads)
  {
    for (auto &fp : out)
    {
      finish_problem(ctx, fp);
    }
  }
  return out;
}

std::vector<FluxProblem> ocp_problems(const EstimatorContext &ctx,
                                      const std::vector<OcpModeData> &modes, bool loads)
{
  const EdgeSpace &space = *ctx.space;
  const auto &sigma = ctx.coeff->sigma;
  const double ia = 1.0 / ctx.alpha;
  std::vector<FluxProblem> out;
  for (std::size_t i = 0; i < modes.size(); i++)
  {
    const OcpModeData &m = modes[i];
    const double kw = m.k * ctx.period.omega();
    const double tw = time_weight(m.k, ctx.period);
    const int ncomp = m.k == 0 ? 1 : 2;
    for (int c = 0; c < ncomp; c++)
    {
      const Vector &eta = c == 0 ? m.eta_cos : m.eta_sin;
      const Vector &zeta = c == 0 ? m.zeta_cos : m.zeta_sin;
      const Vector &eta_o = c == 0 ? m.eta_sin : m.eta_cos;
      const Vector &zeta_o = c == 0 ? m.zeta_sin : m.zeta_cos;
      const PointField &yd = c == 0 ? m.yd_cos : m.yd_sin;
      // Sign of the perp partner: (v^perp)^c = -v^s, (v^perp)^s = v^c.
      const double ps = c == 0 ? -1.0 : 1.0;

      // tau: R3 = -kw sigma eta^perp + curl tau + zeta / alpha = -(h3 - curl tau).
      FluxProblem ft;
      ft.mode_index = static_cast<int>(i);
      ft.component = c;
      ft.variable = 0;
      ft.time_weight = tw;
      ft.curl_slot = 2;
      ft.flux_slot = 1;
      ft.curl_target = [&space, &sigma, &eta_o, &zeta, kw, ps, ia](const PointContext &p)
      {
        Vec3 v = -ia * space.value(zeta, p.tet, p.bary);
        if (kw != 0.0)
        {
          v += kw * ps * sigma[p.tet] * space.value(eta_o, p.tet, p.bary);
        }
        return v;
      };
      ft.flux_target = nu_curl(ctx, eta);

      // rho: R1 = -kw sigma zeta^perp - curl rho + eta - y_d.
      FluxProblem fr = ft;
      fr.variable = 1;
      fr.curl_slot = 0;
      fr.flux_slot = 3;
      fr.curl_target = [&space, &sigma, &zeta_o, &eta, &yd, kw, ps](const PointContext &p)
      {
        Vec3 v = space.value(eta, p.tet, p.bary) - yd(p);
        if (kw != 0.0)
        {
          v -= kw * ps * sigma[p.tet] * space.value(zeta_o, p.tet, p.bary);
        }
        return v;
      };
      fr.flux_target = nu_curl(ctx, zeta);
      out.push_back(std::move(ft));
      out.push_back(std::move(fr));
    }
  }
  if (loads)
  {
    for (auto &fp : out)
    {
      finish_problem(ctx, fp);
    }
  }
  return out;
}

struct ProblemResiduals
{
  double curl = 0.0;
  double flux = 0.0;
};

ProblemResiduals evaluate(const EstimatorContext &ctx, const FluxProblem &fp, const Vector &q)
{
  const EdgeSpace &space = *ctx.space;
  ProblemResiduals r;
  r.curl = integrate_sq(space, [&](const PointContext &p)
                        { return Vec3(fp.curl_target(p) - space.curl(q, p.tet)); });
  r.flux = integrate_sq(space, [&](const PointContext &p)
                        { return Vec3(space.value(q, p.tet, p.bary) - fp.flux_target(p)); });
  return r;
}

const Vector &flux_of(const std::vector<ModeFlux> &tau, const std::vector<ModeFlux> &rho,
                      const FluxProblem &fp)
{
  const ModeFlux &mf = fp.variable == 0 ? tau[fp.mode_index] : rho[fp.mode_index];
  return fp.component == 0 ? mf.cos : mf.sin;
}

// Majorant-specific pieces: slot weights as a function of the Young parameters and the
// closed-form parameter update.
struct Functional
{
  ProblemKind kind;
  StabilityConstants constants;

  int slots() const { return kind == ProblemKind::forward ? 2 : 4; }

  std::vector<double> weights(const std::vector<double> &betas) const
  {
    if (kind == ProblemKind::forward)
    {
      const double b = betas[0];
      const double cf2 = constants.friedrichs * constants.friedrichs;
      const double c2 = constants.lower * constants.lower;
      return {cf2 * (1.0 + b) / c2, (1.0 + b) / b / c2};
    }
    const auto w = ocp_weights({betas[0], betas[1], betas[2]}, constants.friedrichs,
                               constants.lower);
    return {w.begin(), w.end()};
  }

  std::vector<double> update(const std::vector<double> &sums,
                             const std::vector<double> &betas) const
  {
    if (kind == ProblemKind::forward)
    {
      const double a = constants.friedrichs * constants.friedrichs * sums[0];
      if (a == 0.0 && sums[1] == 0.0)
      {
        return betas;
      }
      return {beta_optimal(a, sums[1])};
    }
    const OcpBetas b = beta_optimal_ocp({sums[0], sums[1], sums[2], sums[3]}, constants.friedrichs);
    return {b.b1, b.b2, b.b3};
  }
};

MajorantReport run_minimization(const EstimatorContext &ctx, Functional functional,
                                std::vector<FluxProblem> problems, std::vector<int> mode_ks,
                                double remainder, const MajorantConfig &config,
                                std::optional<ErrorQuantity> error)
{
  if (!(config.tol > 0.0) || config.maxit < 1)
  {
    throw ConfigError("majorant: tolerance and iteration limit must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  const int nslots = functional.slots();
  const std::size_t nmodes = mode_ks.size();
  const Eigen::Index ndof = ctx.mass.rows();

  MajorantReport rep;
  rep.problem = functional.kind;
  rep.modes = mode_ks;
  rep.remainder = remainder;
  rep.constants = functional.constants;
  rep.tau.assign(nmodes, {Vector::Zero(ndof), Vector::Zero(ndof)});
  if (functional.kind == ProblemKind::ocp)
  {
    rep.rho.assign(nmodes, {Vector::Zero(ndof), Vector::Zero(ndof)});
  }
  std::vector<double> betas(functional.kind == ProblemKind::forward ? 1 : 3,
                            clamp_beta(config.beta0));

  const Eigen::SparseMatrix<double> mass = ctx.mass;
  const Eigen::SparseMatrix<double> curl_curl = ctx.curl_curl;
  using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;

  double previous = 0.0;
  for (int it = 1; it <= config.maxit; it++)
  {
    const std::vector<double> w = functional.weights(betas);

    // One factorization per distinct (curl slot, flux slot) pair.
    std::map<std::pair<int, int>, std::unique_ptr<Factor>> factors;
    for (const auto &fp : problems)
    {
      auto key = std::make_pair(fp.curl_slot, fp.flux_slot);
      if (!factors.count(key))
      {
        Eigen::SparseMatrix<double> a = w[fp.curl_slot] * curl_curl + w[fp.flux_slot] * mass;
        auto f = std::make_unique<Factor>(a);
        if (f->info() != Eigen::Success)
        {
          throw SolverError("majorant: flux system factorization failed");
        }
        factors.emplace(key, std::move(f));
      }
    }

    std::vector<ProblemResiduals> res(problems.size());
    parallel_for(static_cast<int>(problems.size()), config.threads,
                 [&](int i)
                 {
                   const FluxProblem &fp = problems[i];
                   const Vector rhs = w[fp.curl_slot] * fp.curl_load + w[fp.flux_slot] * fp.flux_load;
                   const Vector q = factors.at({fp.curl_slot, fp.flux_slot})->solve(rhs);
                   ModeFlux &mf = fp.variable == 0 ? rep.tau[fp.mode_index] : rep.rho[fp.mode_index];
                   (fp.component == 0 ? mf.cos : mf.sin) = q;
                   res[i] = evaluate(ctx, fp, q);
                 });

    std::vector<double> sums(nslots, 0.0);
    rep.per_mode.assign(nmodes, ModeResiduals{});
    for (std::size_t m = 0; m < nmodes; m++)
    {
      rep.per_mode[m].k = mode_ks[m];
      rep.per_mode[m].residual_sq.assign(nslots, 0.0);
    }
    for (std::size_t i = 0; i < problems.size(); i++)
    {
      const FluxProblem &fp = problems[i];
      sums[fp.curl_slot] += fp.time_weight * res[i].curl;
      sums[fp.flux_slot] += fp.time_weight * res[i].flux;
      rep.per_mode[fp.mode_index].residual_sq[fp.curl_slot] += res[i].curl;
      rep.per_mode[fp.mode_index].residual_sq[fp.flux_slot] += res[i].flux;
    }
    std::vector<double> with_rem = sums;
    with_rem[0] += remainder;
    double m2 = 0.0;
    for (int s = 0; s < nslots; s++)
    {
      m2 += w[s] * with_rem[s];
    }

    MajorantIteration rec;
    rec.iteration = it;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.betas = betas;
    rec.majorant_sq = m2;
    if (error && error->seminorm_sq > 0.0)
    {
      rec.i_eff = m2 / error->seminorm_sq;
    }
    rep.trace.push_back(rec);
    rep.residual_sums = sums;
    rep.betas = betas;
    rep.majorant_sq = m2;

    if (it > 1 && std::abs(previous - m2) < config.tol)
    {
      rep.converged = true;
      break;
    }
    previous = m2;
    if (it < config.maxit)
    {
      betas = functional.update(with_rem, betas);
    }
  }
  if (error)
  {
    rep.error_seminorm_sq = error->seminorm_sq;
    rep.error_norm_sq = error->norm_sq;
    if (error->seminorm_sq > 0.0)
    {
      rep.i_eff = efficiency_index(rep.majorant_sq, error->seminorm_sq);
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

template <typename ModeData>
std::vector<int> ks_of(const std::vector<ModeData> &modes)
{
  std::vector<int> ks;
  for (const auto &m : modes)
  {
    if (m.k < 0)
    {
      throw std::invalid_argument("majorant: negative mode index");
    }
    ks.push_back(m.k);
  }
  return ks;
}

}  // namespace

ForwardSums residuals_forward(const EstimatorContext &ctx, const ForwardModeData &mode,
                              const ModeFlux &tau)
{
  const std::vector<ForwardModeData> modes = {mode};
  const auto problems = forward_problems(ctx, modes, false);
  const std::vector<ModeFlux> taus = {tau};
  ForwardSums s;
  for (const auto &fp : problems)
  {
    const ProblemResiduals r = evaluate(ctx, fp, flux_of(taus, taus, fp));
    s.r1 += r.curl;
    s.r2 += r.flux;
  }
  return s;
}

OcpSums residuals_ocp(const EstimatorContext &ctx, const OcpModeData &mode, const ModeFlux &tau,
                      const ModeFlux &rho)
{
  const std::vector<OcpModeData> modes = {mode};
  const auto problems = ocp_problems(ctx, modes, false);
  const std::vector<ModeFlux> taus = {tau}, rhos = {rho};
  std::array<double, 4> slots{};
  for (const auto &fp : problems)
  {
    const ProblemResiduals r = evaluate(ctx, fp, flux_of(taus, rhos, fp));
    slots[fp.curl_slot] += r.curl;
    slots[fp.flux_slot] += r.flux;
  }
  return {slots[0], slots[1], slots[2], slots[3]};
}

MajorantReport minimize_majorant(const EstimatorContext &ctx,
                                 const std::vector<ForwardModeData> &modes, double remainder,
                                 const MajorantConfig &config, std::optional<ErrorQuantity> error)
{
  return run_minimization(ctx, {ProblemKind::forward, ctx.constants},
                          forward_problems(ctx, modes, true), ks_of(modes), remainder, config,
                          error);
}

MajorantReport minimize_majorant(const EstimatorContext &ctx, const std::vector<OcpModeData> &modes,
                                 double remainder, const MajorantConfig &config,
                                 std::optional<ErrorQuantity> error)
{
  return run_minimization(ctx, {ProblemKind::ocp, ctx.constants}, ocp_problems(ctx, modes, true),
                          ks_of(modes), remainder, config, error);
}

void write_trace_csv(std::ostream &os, const MajorantReport &report)
{
  os << "iteration,ctime";
  if (report.problem == ProblemKind::forward)
  {
    os << ",beta";
  }
  else
  {
    os << ",beta1,beta2,beta3";
  }
  os << ",majorant_sq,i_eff\n";
  os.precision(10);
  for (const auto &it : report.trace)
  {
    os << it.iteration << "," << it.seconds;
    for (double b : it.betas)
    {
      os << "," << b;
    }
    os << "," << it.majorant_sq << ",";
    if (std::isfinite(it.i_eff))
    {
      os << it.i_eff;
    }
    os << "\n";
  }
}

}  // namespace mheddy

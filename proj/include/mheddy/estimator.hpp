// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_ESTIMATOR_HPP
#define MHEDDY_ESTIMATOR_HPP

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mheddy/edge_fem.hpp"
#include "mheddy/harmonics.hpp"

namespace mheddy
{

enum class ConstantsContext
{
  forward_seminorm,
  forward_norm,
  ocp_norm,
  ocp_seminorm
};

struct MaterialBounds
{
  double sigma_min = 1.0, sigma_max = 1.0;
  double nu_min = 1.0, nu_max = 1.0;

  static MaterialBounds from(const Coefficients &c)
  {
    return {c.sigma_min, c.sigma_max, c.nu_min, c.nu_max};
  }
};

struct StabilityConstants
{
  ConstantsContext context = ConstantsContext::forward_seminorm;
  double lower = 1.0;  // inf-sup constant
  double upper = 1.0;  // sup-sup constant
  double friedrichs = 1.0;
};

// Friedrichs constant of the unit cube, 1 / (sqrt(2) pi).
double unit_cube_friedrichs();

StabilityConstants stability_constants(const MaterialBounds &bounds, double alpha,
                                       double friedrichs, ConstantsContext context);

inline constexpr double kBetaMin = 1e-8;
inline constexpr double kBetaMax = 1e8;

double clamp_beta(double beta);

// Minimizer of (1 + b) A + (1 + b) B / b, i.e. sqrt(B / A), clamped. A = C_F^2 sum ||R1||^2,
// B = sum ||R2||^2.
double beta_optimal(double a, double b);

// Space-time residual sums. Slot order R1, R2 (forward) and R1, R2, R3, R4 (ocp).
struct ForwardSums
{
  double r1 = 0.0;
  double r2 = 0.0;
};

struct OcpSums
{
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
};

struct OcpBetas
{
  double b1 = 1.0;
  double b2 = 1.0;
  double b3 = 1.0;
};

// Closed-form minimizer of the quadratic ocp majorant: b2 and b3 do not depend on b1, so
// one coordinate sweep (b2, b3, then b1) reaches the fixed point.
OcpBetas beta_optimal_ocp(const OcpSums &sums, double friedrichs);

enum class MajorantForm
{
  linear_seminorm,
  quadratic,
  norm
};

// Squared majorant of the forward problem. The remainder is added to the R1 sum.
double majorant_forward(const ForwardSums &sums, const StabilityConstants &constants, double beta,
                        double remainder, MajorantForm form);

// Squared quadratic majorant of the optimality system.
double majorant_ocp(const OcpSums &sums, const StabilityConstants &constants,
                    const OcpBetas &betas, double remainder);

// I_eff = M^2 / E with E the squared error (semi)norm.
double efficiency_index(double majorant_sq, double error_sq);

//
// Shared inputs of the residual evaluation: the unconstrained edge space in which the flux
// variables live, the coefficients, and the period.
//
struct EstimatorContext
{
  const EdgeSpace *space = nullptr;
  const Coefficients *coeff = nullptr;
  PeriodSpec period;
  double alpha = 1.0;
  StabilityConstants constants;
  SparseSym mass;       // unconstrained, unit weight
  SparseSym curl_curl;  // unconstrained, unit weight

  static EstimatorContext make(const EdgeSpace &space, const Coefficients &coeff,
                               const PeriodSpec &period, const StabilityConstants &constants,
                               double alpha = 1.0);
};

// Mode k of an approximation and data; fields are coefficient vectors over all edges. For
// k = 0 only the cosine entries are used.
struct ForwardModeData
{
  int k = 0;
  Vector eta_cos, eta_sin;
  PointField u_cos, u_sin;
};

struct OcpModeData
{
  int k = 0;
  Vector eta_cos, eta_sin;
  Vector zeta_cos, zeta_sin;
  PointField yd_cos, yd_sin;
};

struct ModeFlux
{
  Vector cos, sin;
};

// Squared L2 norms of the residuals of one mode, cosine and sine parts summed.
ForwardSums residuals_forward(const EstimatorContext &ctx, const ForwardModeData &mode,
                              const ModeFlux &tau);

OcpSums residuals_ocp(const EstimatorContext &ctx, const OcpModeData &mode, const ModeFlux &tau,
                      const ModeFlux &rho);

enum class ProblemKind
{
  forward,
  ocp
};

struct MajorantConfig
{
  double tol = 1e-4;  // absolute change of M^2
  int maxit = 50;
  double beta0 = 1.0;
  int threads = 1;
};

struct MajorantIteration
{
  int iteration = 0;
  double seconds = 0.0;
  std::vector<double> betas;
  double majorant_sq = 0.0;
  double i_eff = std::numeric_limits<double>::quiet_NaN();
};

struct ModeResiduals
{
  int k = 0;
  std::vector<double> residual_sq;  // per residual, cosine and sine summed
};

struct MajorantReport
{
  ProblemKind problem = ProblemKind::forward;
  std::vector<int> modes;
  std::vector<ModeResiduals> per_mode;
  std::vector<double> residual_sums;  // time-weighted, remainder excluded
  std::vector<double> betas;
  double remainder = 0.0;
  double majorant_sq = 0.0;
  double error_seminorm_sq = std::numeric_limits<double>::quiet_NaN();
  double error_norm_sq = std::numeric_limits<double>::quiet_NaN();
  double i_eff = std::numeric_limits<double>::quiet_NaN();
  StabilityConstants constants;
  std::vector<MajorantIteration> trace;
  bool converged = false;
  double seconds = 0.0;
  // Final flux fields, indexed like `modes`.
  std::vector<ModeFlux> tau;
  std::vector<ModeFlux> rho;
};

struct ErrorQuantity
{
  double seminorm_sq = 0.0;
  double norm_sq = 0.0;
};

// Alternating minimization over the flux fields and the Young parameters. The efficiency
// index uses the seminorm part of `error` when provided.
MajorantReport minimize_majorant(const EstimatorContext &ctx,
                                 const std::vector<ForwardModeData> &modes, double remainder,
                                 const MajorantConfig &config,
                                 std::optional<ErrorQuantity> error = std::nullopt);

MajorantReport minimize_majorant(const EstimatorContext &ctx, const std::vector<OcpModeData> &modes,
                                 double remainder, const MajorantConfig &config,
                                 std::optional<ErrorQuantity> error = std::nullopt);

// iteration,ctime,beta...,majorant_sq,i_eff
void write_trace_csv(std::ostream &os, const MajorantReport &report);

// Interpretation note attached to every serialized report.
extern const char *const kEfficiencyNote;

}  // namespace mheddy

#endif  // MHEDDY_ESTIMATOR_HPP

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_RUNNER_HPP
#define MHEDDY_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "mheddy/estimator.hpp"
#include "mheddy/harmonics.hpp"
#include "mheddy/mesh.hpp"
#include "mheddy/systems.hpp"

namespace mheddy
{

// Conductivity and reluctivity override on tets whose centroid lies in the box.
struct Region
{
  Box box;
  double sigma = 1.0;
  double nu = 1.0;
};

struct RunConfig
{
  std::string problem = "forward";       // forward | ocp
  std::string preset = "paper-forward";  // paper-forward | paper-ocp | custom
  int mesh_n = 2;
  double period = 6.283185307179586;
  int truncation = 1;
  double sigma = 1.0;
  double nu = 1.0;
  std::vector<Region> regions;
  std::vector<double> alphas = {1.0};
  double minres_tol = 1e-10;
  int minres_maxit = 2000;
  double gauge_tol = 1e-9;
  double majorant_tol = 1e-4;
  int majorant_maxit = 50;
  std::optional<double> friedrichs;
  // Data signal of the custom preset (the load for forward, the desired state for ocp).
  std::vector<ExpTrigTerm> custom_terms;
  int time_panels = 10;
  int time_points = 8;
  // Replace the discrete solutions by edge interpolants of the reference solution.
  bool exact_interpolant = false;
  bool write_mesh = false;
  std::string output_dir = "out";
  int threads = 1;
  bool verbose = false;

  void validate() const;
  double friedrichs_constant() const;
  PeriodSpec period_spec() const;
  TimeQuadrature time_quadrature() const;
  ExpTrigSignal signal() const;
  bool uniform_coefficients() const;
};

// Throws ConfigError on malformed input. Unknown keys are rejected.
RunConfig parse_config(const std::string &json_text);
RunConfig load_config(const std::string &path);
std::string config_to_json(const RunConfig &config);

struct ModeRun
{
  int k = 0;
  SolveStats stats;
  MajorantReport report;
  std::optional<ErrorQuantity> error;
};

struct ForwardResult
{
  std::vector<ModeRun> modes;
  MajorantReport total;
  std::optional<ErrorQuantity> total_error;
  double remainder = 0.0;
  double gauge_inconsistency = 0.0;
  int num_dofs = 0;
  bool bound_ok = true;
};

struct OcpAlphaRun
{
  double alpha = 1.0;
  std::vector<ModeRun> modes;
  MajorantReport total;
  std::optional<ErrorQuantity> total_error;
  double state_error_seminorm_sq = 0.0;  // state part only, when a reference exists
};

struct OcpResult
{
  std::vector<OcpAlphaRun> runs;
  double remainder = 0.0;
  int num_dofs = 0;
  bool bound_ok = true;
};

ForwardResult run_forward(const RunConfig &config);
OcpResult run_ocp(const RunConfig &config);

// Writes table_forward_k{K}.csv, table_forward_total.csv, report.json (and mesh.txt).
void write_forward(const ForwardResult &result, const RunConfig &config);

// Writes table_ocp_k{K}.csv, table_ocp_total.csv, report.json (and mesh.txt).
void write_ocp(const OcpResult &result, const RunConfig &config);

struct CheckResult
{
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> verify(const RunConfig &config);

// Lower bound on I_eff accepted as a guaranteed bound.
inline constexpr double kBoundSlack = 1e-6;

}  // namespace mheddy

#endif  // MHEDDY_RUNNER_HPP

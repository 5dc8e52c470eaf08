// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mheddy/runner.hpp"

namespace
{

enum ExitCode
{
  kOk = 0,
  kFailedCheck = 1,
  kConfigError = 2,
  kSolverError = 3,
  kBoundViolation = 4
};

mheddy::RunConfig resolve_config(const std::string &path, const std::string &out, int threads,
                                 bool verbose, const char *problem)
{
  mheddy::RunConfig c = path.empty() ? mheddy::RunConfig{} : mheddy::load_config(path);
  if (path.empty() && std::string(problem) == "ocp")
  {
    c.preset = "paper-ocp";
  }
  if (problem[0] != '\0')
  {
    c.problem = problem;
  }
  if (!out.empty())
  {
    c.output_dir = out;
  }
  if (threads > 0)
  {
    c.threads = threads;
  }
  c.verbose = c.verbose || verbose;
  c.validate();
  return c;
}

void print_forward(const mheddy::ForwardResult &r)
{
  for (const auto &m : r.modes)
  {
    std::printf("k=%d  minres_its=%d  majorant_sq=%.6e  i_eff=%.6f  majorant_its=%zu\n", m.k,
                m.stats.iterations, m.report.majorant_sq, m.report.i_eff, m.report.trace.size());
  }
  std::printf("total  majorant_sq=%.6e  error_sq=%.6e  i_eff=%.6f  remainder=%.3e\n",
              r.total.majorant_sq, r.total.error_seminorm_sq, r.total.i_eff, r.remainder);
}

void print_ocp(const mheddy::OcpResult &r)
{
  for (const auto &run : r.runs)
  {
    int its = 0;
    for (const auto &m : run.modes)
    {
      its += m.stats.iterations;
    }
    std::printf("alpha=%-8g majorant_sq=%.6e  error_sq=%.6e  i_eff=%.6f  minres_its=%d\n",
                run.alpha, run.total.majorant_sq, run.total.error_seminorm_sq, run.total.i_eff,
                its);
  }
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Multiharmonic eddy-current solver with guaranteed error majorants"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;
  bool verbose = false;
  auto add_common = [&](CLI::App *sub)
  {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", verbose, "Write MINRES traces and progress");
  };
  CLI::App *forward = app.add_subcommand("forward", "Solve the forward problem and estimate the error");
  CLI::App *ocp = app.add_subcommand("ocp", "Solve the optimality system for each alpha");
  CLI::App *verify = app.add_subcommand("verify", "Run the oracle self-check suite");
  add_common(forward);
  add_common(ocp);
  add_common(verify);
  CLI11_PARSE(app, argc, argv);

  try
  {
    if (forward->parsed())
    {
      const auto c = resolve_config(config_path, out_dir, threads, verbose, "forward");
      const auto r = mheddy::run_forward(c);
      mheddy::write_forward(r, c);
      print_forward(r);
      if (!r.bound_ok)
      {
        std::fprintf(stderr, "error: computed majorant is below the error\n");
        return kBoundViolation;
      }
    }
    else if (ocp->parsed())
    {
      const auto c = resolve_config(config_path, out_dir, threads, verbose, "ocp");
      const auto r = mheddy::run_ocp(c);
      mheddy::write_ocp(r, c);
      print_ocp(r);
      if (!r.bound_ok)
      {
        std::fprintf(stderr, "error: computed majorant is below the error\n");
        return kBoundViolation;
      }
    }
    else if (verify->parsed())
    {
      const auto c = resolve_config(config_path, out_dir, threads, verbose, "");
      const auto checks = mheddy::verify(c);
      bool ok = true;
      for (const auto &chk : checks)
      {
        std::printf("%-20s %-4s %7.2fs  %s\n", chk.name.c_str(), chk.passed ? "PASS" : "FAIL",
                    chk.seconds, chk.detail.c_str());
        ok = ok && chk.passed;
      }
      return ok ? kOk : kFailedCheck;
    }
  }
  catch (const mheddy::ConfigError &e)
  {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  }
  catch (const mheddy::SolverError &e)
  {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolverError;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolverError;
  }
  return kOk;
}

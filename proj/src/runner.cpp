// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mheddy/oracles.hpp"
#include "mheddy/parallel.hpp"
#include "mheddy/problem.hpp"

namespace mheddy
{

using json = nlohmann::json;

void RunConfig::validate() const
{
  if (problem != "forward" && problem != "ocp")
  {
    throw ConfigError("problem must be 'forward' or 'ocp'");
  }
  if (preset != "paper-forward" && preset != "paper-ocp" && preset != "custom")
  {
    throw ConfigError("preset must be 'paper-forward', 'paper-ocp' or 'custom'");
  }
  if (preset == "custom" && custom_terms.empty())
  {
    throw ConfigError("custom preset needs at least one entry in custom_terms");
  }
  if (mesh_n < 1)
  {
    throw ConfigError("mesh_n must be at least 1");
  }
  if (!(period > 0.0) || !std::isfinite(period))
  {
    throw ConfigError("period must be positive");
  }
  if (truncation < 0)
  {
    throw ConfigError("truncation must be nonnegative");
  }
  if (!(sigma > 0.0) || !(nu > 0.0))
  {
    throw ConfigError("sigma and nu must be positive");
  }
  for (const auto &r : regions)
  {
    if (!(r.sigma > 0.0) || !(r.nu > 0.0))
    {
      throw ConfigError("region sigma and nu must be positive");
    }
  }
  if (alphas.empty())
  {
    throw ConfigError("alphas must not be empty");
  }
  for (double a : alphas)
  {
    if (!(a > 0.0) || !std::isfinite(a))
    {
      throw ConfigError("alpha entries must be positive");
    }
  }
  if (!(minres_tol > 0.0) || !(majorant_tol > 0.0) || !(gauge_tol > 0.0))
  {
    throw ConfigError("tolerances must be positive");
  }
  if (minres_maxit < 1 || majorant_maxit < 1)
  {
    throw ConfigError("iteration limits must be positive");
  }
  if (friedrichs && !(*friedrichs > 0.0))
  {
    throw ConfigError("friedrichs must be positive");
  }
  if (time_panels < 1 || time_points < 1 || time_panels * time_points < 4 * (truncation + 1))
  {
    throw ConfigError("time quadrature needs at least 4 (N + 1) samples");
  }
  if (threads < 1)
  {
    throw ConfigError("threads must be at least 1");
  }
}

double RunConfig::friedrichs_constant() const
{
  return friedrichs ? *friedrichs : unit_cube_friedrichs();
}

PeriodSpec RunConfig::period_spec() const
{
  return PeriodSpec::make(period, truncation);
}

TimeQuadrature RunConfig::time_quadrature() const
{
  return {time_panels, time_points};
}

ExpTrigSignal RunConfig::signal() const
{
  if (preset == "paper-forward")
  {
    return paper_forward_signal();
  }
  if (preset == "paper-ocp")
  {
    return paper_ocp_signal();
  }
  return ExpTrigSignal(custom_terms);
}

bool RunConfig::uniform_coefficients() const
{
  return regions.empty();
}

namespace
{

template <typename T>
void read(const json &j, const char *key, T &out)
{
  if (j.contains(key))
  {
    out = j.at(key).get<T>();
  }
}

Vec3 read_vec3(const json &j)
{
  if (!j.is_array() || j.size() != 3)
  {
    throw ConfigError("expected an array of three numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

RunConfig parse_config(const std::string &json_text)
{
  RunConfig c;
  try
  {
    const json j = json::parse(json_text);
    if (!j.is_object())
    {
      throw ConfigError("config must be a JSON object");
    }
    static const std::vector<std::string> known = {
        "problem",        "preset",       "mesh_n",         "period",      "truncation",
        "sigma",          "nu",           "regions",        "alphas",      "minres_tol",
        "minres_maxit",   "gauge_tol",    "majorant_tol",   "majorant_maxit", "friedrichs",
        "custom_terms",   "time_panels",  "time_points",    "exact_interpolant",
        "write_mesh",     "output_dir",   "threads",        "verbose"};
    for (const auto &item : j.items())
    {
      if (std::find(known.begin(), known.end(), item.key()) == known.end())
      {
        throw ConfigError("unknown config key '" + item.key() + "'");
      }
    }
    read(j, "problem", c.problem);
    read(j, "preset", c.preset);
    read(j, "mesh_n", c.mesh_n);
    read(j, "period", c.period);
    read(j, "truncation", c.truncation);
    read(j, "sigma", c.sigma);
    read(j, "nu", c.nu);
    read(j, "alphas", c.alphas);
    read(j, "minres_tol", c.minres_tol);
    read(j, "minres_maxit", c.minres_maxit);
    read(j, "gauge_tol", c.gauge_tol);
    read(j, "majorant_tol", c.majorant_tol);
    read(j, "majorant_maxit", c.majorant_maxit);
    read(j, "time_panels", c.time_panels);
    read(j, "time_points", c.time_points);
    read(j, "exact_interpolant", c.exact_interpolant);
    read(j, "write_mesh", c.write_mesh);
    read(j, "output_dir", c.output_dir);
    read(j, "threads", c.threads);
    read(j, "verbose", c.verbose);
    if (j.contains("friedrichs") && !j.at("friedrichs").is_null())
    {
      c.friedrichs = j.at("friedrichs").get<double>();
    }
    if (j.contains("regions"))
    {
      for (const auto &r : j.at("regions"))
      {
        Region reg;
        reg.box.lo = read_vec3(r.at("lo"));
        reg.box.hi = read_vec3(r.at("hi"));
        read(r, "sigma", reg.sigma);
        read(r, "nu", reg.nu);
        c.regions.push_back(reg);
      }
    }
    if (j.contains("custom_terms"))
    {
      for (const auto &t : j.at("custom_terms"))
      {
        ExpTrigTerm term;
        read(t, "rate", term.rate);
        read(t, "freq", term.freq);
        read(t, "cos", term.cos_amp);
        read(t, "sin", term.sin_amp);
        c.custom_terms.push_back(term);
      }
    }
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace
{

json config_json(const RunConfig &c)
{
  json j;
  j["problem"] = c.problem;
  j["preset"] = c.preset;
  j["mesh_n"] = c.mesh_n;
  j["period"] = c.period;
  j["truncation"] = c.truncation;
  j["sigma"] = c.sigma;
  j["nu"] = c.nu;
  j["regions"] = json::array();
  for (const auto &r : c.regions)
  {
    j["regions"].push_back({{"lo", {r.box.lo.x(), r.box.lo.y(), r.box.lo.z()}},
                            {"hi", {r.box.hi.x(), r.box.hi.y(), r.box.hi.z()}},
                            {"sigma", r.sigma},
                            {"nu", r.nu}});
  }
  j["alphas"] = c.alphas;
  j["minres_tol"] = c.minres_tol;
  j["minres_maxit"] = c.minres_maxit;
  j["gauge_tol"] = c.gauge_tol;
  j["majorant_tol"] = c.majorant_tol;
  j["majorant_maxit"] = c.majorant_maxit;
  j["friedrichs"] = c.friedrichs ? json(*c.friedrichs) : json(nullptr);
  j["custom_terms"] = json::array();
  for (const auto &t : c.custom_terms)
  {
    j["custom_terms"].push_back(
        {{"rate", t.rate}, {"freq", t.freq}, {"cos", t.cos_amp}, {"sin", t.sin_amp}});
  }
  j["time_panels"] = c.time_panels;
  j["time_points"] = c.time_points;
  j["exact_interpolant"] = c.exact_interpolant;
  j["write_mesh"] = c.write_mesh;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  j["verbose"] = c.verbose;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig &config)
{
  return config_json(config).dump(2);
}

namespace
{

// Everything the pipelines share. Held by pointer because EdgeSpace refers to the mesh.
struct Setup
{
  RunConfig config;
  PeriodSpec period;
  TimeQuadrature tq;
  TetMesh mesh;
  Coefficients coeff;
  DofMap dofs;
  SystemMatrices mats;
  std::unique_ptr<EdgeSpace> space;
  Vector shape_load;  // (S e_z, phi) on free DOFs
  ExpTrigSignal signal;
  std::vector<TrigCoeffs> data;  // quadrature coefficients, k = 0..N
  double remainder = 0.0;
};

std::unique_ptr<Setup> make_setup(const RunConfig &config)
{
  config.validate();
  auto s = std::make_unique<Setup>();
  s->config = config;
  s->period = config.period_spec();
  s->tq = config.time_quadrature();
  s->mesh = build_box_mesh(config.mesh_n);
  if (config.uniform_coefficients())
  {
    s->coeff = Coefficients::constant(s->mesh, config.sigma, config.nu);
  }
  else
  {
    auto pick = [&config](const Vec3 &x, bool want_sigma)
    {
      double v = want_sigma ? config.sigma : config.nu;
      for (const auto &r : config.regions)
      {
        if ((x.array() >= r.box.lo.array()).all() && (x.array() <= r.box.hi.array()).all())
        {
          v = want_sigma ? r.sigma : r.nu;
        }
      }
      return v;
    };
    s->coeff = Coefficients::from_functions(
        s->mesh, [&](const Vec3 &x) { return pick(x, true); },
        [&](const Vec3 &x) { return pick(x, false); });
  }
  s->dofs = DofMap::interior(s->mesh);
  s->mats = SystemMatrices::assemble(s->mesh, s->coeff, s->dofs);
  s->space = std::make_unique<EdgeSpace>(s->mesh);
  s->shape_load = assemble_load(*s->space, s->dofs, analytic(shape::field));
  s->signal = config.signal();
  const TimeSignal g = s->signal.signal();
  for (int k = 0; k <= config.truncation; k++)
  {
    s->data.push_back(fourier_coeff(g, k, s->period, s->tq));
  }
  const double s_norm = integrate_sq(*s->space, analytic(shape::field));
  s->remainder = remainder(g, s_norm, s->period, s->tq);
  return s;
}

PointField scaled_shape(double a)
{
  return [a](const PointContext &p) { return Vec3(a * shape::field(p.x)); };
}

MajorantConfig majorant_config(const RunConfig &c, int threads)
{
  MajorantConfig m;
  m.tol = c.majorant_tol;
  m.maxit = c.majorant_maxit;
  m.threads = threads;
  return m;
}

SolverConfig solver_config(const RunConfig &c)
{
  SolverConfig s;
  s.tol = c.minres_tol;
  s.maxit = c.minres_maxit;
  s.gauge_tol = c.gauge_tol;
  s.record_history = c.verbose;
  return s;
}

bool bound_holds(const MajorantReport &r)
{
  return !std::isfinite(r.i_eff) || r.i_eff >= 1.0 - kBoundSlack;
}

void maybe_write_history(const RunConfig &c, const std::string &name, const SolveStats &stats)
{
  if (!c.verbose)
  {
    return;
  }
  std::filesystem::create_directories(c.output_dir);
  std::ofstream os(std::filesystem::path(c.output_dir) / name);
  write_trace(os, stats);
}

}  // namespace

ForwardResult run_forward(const RunConfig &config)
{
  const auto setup = make_setup(config);
  const Setup &s = *setup;
  const int n = config.truncation;
  std::optional<ReferenceSolution> ref;
  if (config.uniform_coefficients())
  {
    ref = ReferenceSolution::forward(s.signal, config.sigma, config.nu, s.period);
  }
  if (config.exact_interpolant && !ref)
  {
    throw ConfigError("exact_interpolant needs uniform coefficients");
  }

  ForwardResult result;
  result.num_dofs = s.dofs.size();
  result.remainder = s.remainder;
  result.modes.resize(n + 1);
  std::vector<ForwardModeData> data(n + 1);
  const SolverConfig sc = solver_config(config);

  parallel_for(n + 1, config.threads,
               [&](int k)
               {
                 ModeRun &run = result.modes[k];
                 run.k = k;
                 ForwardModeData &d = data[k];
                 d.k = k;
                 if (config.exact_interpolant)
                 {
                   const ModeAmplitude a = ref->state(k);
                   d.eta_cos = a.c * interpolate(s.mesh, shape::field);
                   d.eta_sin = a.s * interpolate(s.mesh, shape::field);
                 }
                 else if (k == 0)
                 {
                   const ModeSolution sol =
                       solve(build_forward0(s.mats, s.data[0].c * s.shape_load), sc);
                   run.stats = sol.stats;
                   result.gauge_inconsistency = sol.gauge_inconsistency;
                   d.eta_cos = s.dofs.expand(sol.fields[0]);
                   d.eta_sin = Vector::Zero(s.dofs.num_edges);
                 }
                 else
                 {
                   const ModeSolution sol =
                       solve(build_forward(k, s.mats, s.period, s.data[k].c * s.shape_load,
                                           s.data[k].s * s.shape_load),
                             sc);
                   run.stats = sol.stats;
                   d.eta_cos = s.dofs.expand(sol.fields[0]);
                   d.eta_sin = s.dofs.expand(sol.fields[1]);
                 }
                 d.u_cos = scaled_shape(s.data[k].c);
                 d.u_sin = scaled_shape(s.data[k].s);
               });
  for (int k = 0; k <= n; k++)
  {
    maybe_write_history(config, "minres_forward_k" + std::to_string(k) + ".csv",
                        result.modes[k].stats);
  }

  const StabilityConstants constants =
      stability_constants(MaterialBounds::from(s.coeff), 1.0, config.friedrichs_constant(),
                          ConstantsContext::forward_seminorm);
  const EstimatorContext ctx = EstimatorContext::make(*s.space, s.coeff, s.period, constants);

  parallel_for(n + 1, config.threads,
               [&](int k)
               {
                 ModeRun &run = result.modes[k];
                 if (ref)
                 {
                   run.error = ref->mode_error(*s.space, k, data[k].eta_cos, data[k].eta_sin);
                 }
                 run.report = minimize_majorant(ctx, {data[k]}, 0.0, majorant_config(config, 1),
                                                run.error);
               });

  FourierField eta;
  eta.mode0 = data[0].eta_cos;
  for (int k = 1; k <= n; k++)
  {
    eta.modes.push_back({data[k].eta_cos, data[k].eta_sin});
  }
  if (ref)
  {
    result.total_error = ref->error(*s.space, eta);
  }
  result.total = minimize_majorant(ctx, data, s.remainder, majorant_config(config, config.threads),
                                   result.total_error);

  result.bound_ok = bound_holds(result.total);
  for (const auto &m : result.modes)
  {
    result.bound_ok = result.bound_ok && bound_holds(m.report);
  }
  return result;
}

OcpResult run_ocp(const RunConfig &config)
{
  const auto setup = make_setup(config);
  const Setup &s = *setup;
  const int n = config.truncation;
  OcpResult result;
  result.num_dofs = s.dofs.size();
  result.remainder = s.remainder;
  const SolverConfig sc = solver_config(config);

  for (double alpha : config.alphas)
  {
    std::optional<ReferenceSolution> ref;
    if (config.uniform_coefficients())
    {
      ref = ReferenceSolution::ocp(s.signal, config.sigma, config.nu, alpha, s.period);
    }
    if (config.exact_interpolant && !ref)
    {
      throw ConfigError("exact_interpolant needs uniform coefficients");
    }
    OcpAlphaRun run;
    run.alpha = alpha;
    run.modes.resize(n + 1);
    std::vector<OcpModeData> data(n + 1);
    const ControlParams control{alpha};

    parallel_for(n + 1, config.threads,
                 [&](int k)
                 {
                   ModeRun &mr = run.modes[k];
                   mr.k = k;
                   OcpModeData &d = data[k];
                   d.k = k;
                   const Vector zero = Vector::Zero(s.dofs.num_edges);
                   if (config.exact_interpolant)
                   {
                     const Vector base = interpolate(s.mesh, shape::field);
                     d.eta_cos = ref->state(k).c * base;
                     d.eta_sin = ref->state(k).s * base;
                     d.zeta_cos = ref->adjoint(k).c * base;
                     d.zeta_sin = ref->adjoint(k).s * base;
                   }
                   else if (k == 0)
                   {
                     const ModeSolution sol =
                         solve(build_ocp0(s.mats, control, s.data[0].c * s.shape_load), sc);
                     mr.stats = sol.stats;
                     d.eta_cos = s.dofs.expand(sol.fields[0]);
                     d.zeta_cos = s.dofs.expand(sol.fields[1]);
                     d.eta_sin = zero;
                     d.zeta_sin = zero;
                   }
                   else
                   {
                     const ModeSolution sol = solve(
                         build_ocp(k, s.mats, control, s.period, s.data[k].c * s.shape_load,
                                   s.data[k].s * s.shape_load),
                         sc);
                     mr.stats = sol.stats;
                     d.eta_cos = s.dofs.expand(sol.fields[0]);
                     d.eta_sin = s.dofs.expand(sol.fields[1]);
                     d.zeta_cos = s.dofs.expand(sol.fields[2]);
                     d.zeta_sin = s.dofs.expand(sol.fields[3]);
                   }
                   d.yd_cos = scaled_shape(s.data[k].c);
                   d.yd_sin = scaled_shape(s.data[k].s);
                 });
    for (int k = 0; k <= n; k++)
    {
      std::ostringstream name;
      name << "minres_ocp_alpha" << alpha << "_k" << k << ".csv";
      maybe_write_history(config, name.str(), run.modes[k].stats);
    }

    const StabilityConstants constants =
        stability_constants(MaterialBounds::from(s.coeff), alpha, config.friedrichs_constant(),
                            ConstantsContext::ocp_seminorm);
    const EstimatorContext ctx =
        EstimatorContext::make(*s.space, s.coeff, s.period, constants, alpha);

    parallel_for(n + 1, config.threads,
                 [&](int k)
                 {
                   ModeRun &mr = run.modes[k];
                   if (ref)
                   {
                     mr.error = ref->mode_error(*s.space, k, data[k].eta_cos, data[k].eta_sin,
                                                &data[k].zeta_cos, &data[k].zeta_sin);
                   }
                   mr.report = minimize_majorant(ctx, {data[k]}, 0.0,
                                                 majorant_config(config, 1), mr.error);
                 });

    FourierField eta, zeta;
    eta.mode0 = data[0].eta_cos;
    zeta.mode0 = data[0].zeta_cos;
    for (int k = 1; k <= n; k++)
    {
      eta.modes.push_back({data[k].eta_cos, data[k].eta_sin});
      zeta.modes.push_back({data[k].zeta_cos, data[k].zeta_sin});
    }
    if (ref)
    {
      run.total_error = ref->error(*s.space, eta, &zeta);
      run.state_error_seminorm_sq = ref->error(*s.space, eta).seminorm_sq;
    }
    run.total = minimize_majorant(ctx, data, s.remainder, majorant_config(config, config.threads),
                                  run.total_error);
    result.bound_ok = result.bound_ok && bound_holds(run.total);
    for (const auto &m : run.modes)
    {
      result.bound_ok = result.bound_ok && bound_holds(m.report);
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

namespace
{

json finite_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

const char *context_name(ConstantsContext c)
{
  switch (c)
  {
    case ConstantsContext::forward_seminorm:
      return "forward-seminorm";
    case ConstantsContext::forward_norm:
      return "forward-norm";
    case ConstantsContext::ocp_norm:
      return "ocp-norm";
    case ConstantsContext::ocp_seminorm:
      return "ocp-seminorm";
  }
  return "?";
}

json report_json(const MajorantReport &r)
{
  json j;
  j["problem"] = r.problem == ProblemKind::forward ? "forward" : "ocp";
  j["modes"] = r.modes;
  j["per_mode"] = json::array();
  const char *names[] = {"r1_sq", "r2_sq", "r3_sq", "r4_sq"};
  for (const auto &m : r.per_mode)
  {
    json pm;
    pm["k"] = m.k;
    for (std::size_t i = 0; i < m.residual_sq.size(); i++)
    {
      pm[names[i]] = m.residual_sq[i];
    }
    j["per_mode"].push_back(pm);
  }
  json sums;
  for (std::size_t i = 0; i < r.residual_sums.size(); i++)
  {
    sums[names[i]] = r.residual_sums[i];
  }
  j["residual_sums"] = sums;
  j["betas"] = r.betas;
  j["remainder"] = r.remainder;
  j["majorant_sq"] = r.majorant_sq;
  j["error_seminorm_sq"] = finite_or_null(r.error_seminorm_sq);
  j["error_norm_sq"] = finite_or_null(r.error_norm_sq);
  j["i_eff"] = finite_or_null(r.i_eff);
  j["constants"] = {{"context", context_name(r.constants.context)},
                    {"lower", r.constants.lower},
                    {"upper", r.constants.upper},
                    {"friedrichs", r.constants.friedrichs}};
  j["converged"] = r.converged;
  j["iterations"] = r.trace.size();
  j["ctime"] = r.seconds;
  j["trace"] = json::array();
  for (const auto &it : r.trace)
  {
    j["trace"].push_back({{"iteration", it.iteration},
                          {"ctime", it.seconds},
                          {"betas", it.betas},
                          {"majorant_sq", it.majorant_sq},
                          {"i_eff", finite_or_null(it.i_eff)}});
  }
  return j;
}

json stats_json(const SolveStats &s)
{
  return {{"iterations", s.iterations},
          {"residual", s.residual},
          {"seconds", s.seconds},
          {"converged", s.converged}};
}

std::filesystem::path prepare_output(const RunConfig &config, const TetMesh *mesh)
{
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  if (config.write_mesh && mesh)
  {
    std::ofstream os(dir / "mesh.txt");
    write_mesh(os, *mesh);
  }
  return dir;
}

void write_json(const std::filesystem::path &path, const json &j)
{
  std::ofstream os(path);
  os << j.dump(2) << "\n";
}

void write_ocp_row(std::ostream &os, double alpha, const MajorantReport &r, int minres_iterations)
{
  os << alpha << "," << r.seconds << "," << r.majorant_sq << ",";
  if (std::isfinite(r.i_eff))
  {
    os << r.i_eff;
  }
  for (double b : r.betas)
  {
    os << "," << b;
  }
  os << "," << r.trace.size() << "," << minres_iterations << "\n";
}

}  // namespace

void write_forward(const ForwardResult &result, const RunConfig &config)
{
  TetMesh mesh;
  if (config.write_mesh)
  {
    mesh = build_box_mesh(config.mesh_n);
  }
  const auto dir = prepare_output(config, &mesh);
  for (const auto &m : result.modes)
  {
    std::ofstream os(dir / ("table_forward_k" + std::to_string(m.k) + ".csv"));
    write_trace_csv(os, m.report);
  }
  {
    std::ofstream os(dir / "table_forward_total.csv");
    write_trace_csv(os, result.total);
  }
  json j;
  j["config"] = config_json(config);
  j["interpretation"] = kEfficiencyNote;
  j["num_dofs"] = result.num_dofs;
  j["remainder"] = result.remainder;
  j["gauge_inconsistency"] = result.gauge_inconsistency;
  j["bound_ok"] = result.bound_ok;
  j["modes"] = json::array();
  for (const auto &m : result.modes)
  {
    j["modes"].push_back({{"k", m.k}, {"minres", stats_json(m.stats)}, {"majorant", report_json(m.report)}});
  }
  j["total"] = report_json(result.total);
  write_json(dir / "report.json", j);
}

void write_ocp(const OcpResult &result, const RunConfig &config)
{
  TetMesh mesh;
  if (config.write_mesh)
  {
    mesh = build_box_mesh(config.mesh_n);
  }
  const auto dir = prepare_output(config, &mesh);
  const char *header = "alpha,ctime,majorant_sq,i_eff,beta1,beta2,beta3,iterations,minres_iterations\n";
  for (int k = 0; k <= config.truncation; k++)
  {
    std::ofstream os(dir / ("table_ocp_k" + std::to_string(k) + ".csv"));
    os.precision(10);
    os << header;
    for (const auto &run : result.runs)
    {
      write_ocp_row(os, run.alpha, run.modes[k].report, run.modes[k].stats.iterations);
    }
  }
  {
    std::ofstream os(dir / "table_ocp_total.csv");
    os.precision(10);
    os << header;
    for (const auto &run : result.runs)
    {
      int its = 0;
      for (const auto &m : run.modes)
      {
        its += m.stats.iterations;
      }
      write_ocp_row(os, run.alpha, run.total, its);
    }
  }
  json j;
  j["config"] = config_json(config);
  j["interpretation"] = kEfficiencyNote;
  j["num_dofs"] = result.num_dofs;
  j["remainder"] = result.remainder;
  j["bound_ok"] = result.bound_ok;
  j["runs"] = json::array();
  for (const auto &run : result.runs)
  {
    json r;
    r["alpha"] = run.alpha;
    r["state_error_seminorm_sq"] = run.total_error ? json(run.state_error_seminorm_sq) : json(nullptr);
    r["modes"] = json::array();
    for (const auto &m : run.modes)
    {
      r["modes"].push_back({{"k", m.k}, {"minres", stats_json(m.stats)}, {"majorant", report_json(m.report)}});
    }
    r["total"] = report_json(run.total);
    j["runs"].push_back(r);
  }
  write_json(dir / "report.json", j);
}

namespace
{

template <typename Fn>
CheckResult timed_check(const std::string &name, Fn &&fn)
{
  CheckResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try
  {
    std::tie(r.passed, r.detail) = fn();
  }
  catch (const std::exception &e)
  {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double max_rel(const Vector &a, const Vector &b)
{
  const double scale = std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
  return (a - b).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace

std::vector<CheckResult> verify(const RunConfig &config)
{
  config.validate();
  std::vector<CheckResult> out;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  out.push_back(timed_check(
      "element_quadrature",
      [&]
      {
        const std::array<std::array<Vec3, 4>, 2> tets = {
            std::array<Vec3, 4>{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
            std::array<Vec3, 4>{Vec3(0.1, 0.2, 0), Vec3(1.3, 0.1, 0.2), Vec3(0.2, 0.9, 0.1),
                                Vec3(0.3, 0.4, 1.1)}};
        double err_m = 0.0, err_k = 0.0;
        for (const auto &x : tets)
        {
          const ElementMatrices em = element_matrices(x, 1.0, 1.0);
          err_m = std::max(err_m, (em.mass - oracle::element_mass(x)).cwiseAbs().maxCoeff());
          err_k = std::max(err_k, (em.stiffness - oracle::element_curl_curl(x)).cwiseAbs().maxCoeff());
        }
        return std::make_pair(err_m < 1e-12 && err_k < 1e-8,
                              "mass " + fmt(err_m) + ", stiffness " + fmt(err_k));
      }));

  out.push_back(timed_check(
      "gradient_kernel",
      [&]
      {
        const TetMesh mesh = build_box_mesh(config.mesh_n);
        const Coefficients coeff = Coefficients::constant(mesh, config.sigma, config.nu);
        const DofMap dofs = DofMap::interior(mesh);
        const SparseSym k = assemble(mesh, coeff, MatrixKind::stiffness, dofs);
        const SparseRect g = gradient_incidence_interior(mesh);
        double worst = 0.0;
        for (int trial = 0; trial < 10; trial++)
        {
          Vector psi(g.cols());
          for (auto &v : psi)
          {
            v = uni(rng);
          }
          const Vector gp = g * psi;
          if (gp.size() == 0 || gp.lpNorm<Eigen::Infinity>() == 0.0)
          {
            continue;
          }
          worst = std::max(worst, (k * gp).lpNorm<Eigen::Infinity>() / gp.lpNorm<Eigen::Infinity>());
        }
        return std::make_pair(worst <= 1e-11, "max |K G psi| / |G psi| = " + fmt(worst));
      }));

  out.push_back(timed_check(
      "parseval",
      [&]
      {
        const PeriodSpec period = config.period_spec();
        const TimeQuadrature tq = config.time_quadrature();
        const ExpTrigSignal sig = config.signal();
        const TimeSignal g = sig.signal();
        const double exact_energy = sig.exact_energy(period);
        double truncated = 0.0, coeff_err = 0.0;
        for (int k = 0; k <= period.truncation; k++)
        {
          const TrigCoeffs q = fourier_coeff(g, k, period, tq);
          const TrigCoeffs e = sig.exact_coeff(k, period);
          coeff_err = std::max({coeff_err, std::abs(q.c - e.c), std::abs(q.s - e.s)});
          truncated += time_weight(k, period) * (e.c * e.c + e.s * e.s);
        }
        const double tail = remainder(g, 1.0, period, tq);
        const double rel = std::abs(truncated + tail - exact_energy) / exact_energy;
        const double scale = std::sqrt(exact_energy / period.period);
        return std::make_pair(rel < 1e-8 && coeff_err < 1e-8 * scale,
                              "energy identity " + fmt(rel) + ", coefficients " + fmt(coeff_err / scale));
      }));

  out.push_back(timed_check(
      "dense_solve",
      [&]
      {
        double worst = 0.0;
        for (int n : {1, 2})
        {
          const TetMesh mesh = build_box_mesh(n);
          const Coefficients coeff = Coefficients::constant(mesh, config.sigma, config.nu);
          const DofMap dofs = DofMap::interior(mesh);
          const SystemMatrices mats = SystemMatrices::assemble(mesh, coeff, dofs);
          const PeriodSpec period = PeriodSpec::make(config.period, 1);
          const Vector b = assemble_load(mesh, dofs, shape::field);
          Vector b2(b.size());
          for (auto &v : b2)
          {
            v = uni(rng);
          }
          SolverConfig sc;
          sc.tol = 1e-12;

          const ModeSolution f = solve(build_forward(1, mats, period, b, b2), sc);
          Vector xf(2 * b.size());
          xf << f.fields[0], f.fields[1];
          Vector rhs(2 * b.size());
          rhs << b, b2;
          worst = std::max(worst, max_rel(xf, oracle::dense_solve(
                                                  oracle::forward_unreformulated(mats, period.omega()), rhs)));

          const ModeSolution f0 = solve(build_forward0(mats, b), sc);
          // Dense reference: the gauged system K y = b, G^T Ms y = 0 as a least-squares fit.
          const Eigen::MatrixXd kd = oracle::dense(mats.stiffness);
          const Eigen::MatrixXd gt = oracle::dense(SparseSym(mats.gradient.transpose() * mats.weighted_mass));
          Eigen::MatrixXd stacked(kd.rows() + gt.rows(), kd.cols());
          stacked << kd, gt;
          // The load is consistent only up to quadrature; remove its gradient part first.
          const Eigen::MatrixXd gd = oracle::dense(mats.gradient);
          Vector srhs = Vector::Zero(stacked.rows());
          srhs.head(kd.rows()) = b;
          if (gd.cols() > 0)
          {
            srhs.head(kd.rows()) -= gd * gd.colPivHouseholderQr().solve(b);
          }
          const Vector y0 = stacked.colPivHouseholderQr().solve(srhs);
          worst = std::max(worst, max_rel(f0.fields[0], y0));

          for (double alpha : {0.1, 1.0, 10.0})
          {
            const ModeSystem s = build_ocp(1, mats, {alpha}, period, b, b2);
            const ModeSolution o = solve(s, sc);
            Vector xo(s.size());
            xo << o.fields[0], o.fields[1], o.fields[2], o.fields[3];
            worst = std::max(worst, max_rel(xo, oracle::dense_solve(oracle::dense(s.assemble_operator()), s.rhs)));
            const ModeSystem s0 = build_ocp0(mats, {alpha}, b);
            const ModeSolution o0 = solve(s0, sc);
            Vector x0(s0.size());
            x0 << o0.fields[0], o0.fields[1];
            worst = std::max(worst, max_rel(x0, oracle::dense_solve(oracle::dense(s0.assemble_operator()), s0.rhs)));
          }
        }
        return std::make_pair(worst < 1e-8, "max relative deviation " + fmt(worst));
      }));

  out.push_back(timed_check(
      "friedrichs",
      [&]
      {
        // Fixed mesh: the check is about the continuous constant, not the run mesh.
        const int n = 4;
        const TetMesh mesh = build_box_mesh(n);
        const Coefficients coeff = Coefficients::constant(mesh, 1.0, 1.0);
        const DofMap dofs = DofMap::interior(mesh);
        const double lambda = oracle::smallest_nonzero_eigenvalue(
            assemble(mesh, coeff, MatrixKind::curl_curl, dofs), assemble(mesh, coeff, MatrixKind::mass, dofs));
        const double cf = config.friedrichs_constant();
        const double bound = 0.9 / (cf * cf);
        return std::make_pair(lambda > bound, "discrete eigenvalue " + fmt(lambda) + " vs 0.9 / C_F^2 = " +
                                                  fmt(bound) + " (n = " + std::to_string(n) + ")");
      }));

  out.push_back(timed_check(
      "guaranteed_bound",
      [&]
      {
        RunConfig fc = config;
        fc.problem = "forward";
        fc.preset = "paper-forward";
        fc.regions.clear();
        fc.exact_interpolant = false;
        fc.verbose = false;
        const ForwardResult fr = run_forward(fc);
        double worst = fr.total.i_eff;
        for (const auto &m : fr.modes)
        {
          worst = std::min(worst, m.report.i_eff);
        }
        RunConfig oc = fc;
        oc.problem = "ocp";
        oc.preset = "paper-ocp";
        oc.alphas = {1.0};
        const OcpResult orr = run_ocp(oc);
        for (const auto &run : orr.runs)
        {
          worst = std::min(worst, run.total.i_eff);
          for (const auto &m : run.modes)
          {
            worst = std::min(worst, m.report.i_eff);
          }
        }
        return std::make_pair(fr.bound_ok && orr.bound_ok, "smallest i_eff " + fmt(worst));
      }));
  return out;
}

}  // namespace mheddy

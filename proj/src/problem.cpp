// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/problem.hpp"

#include <cmath>
#include <numbers>

namespace mheddy
{

namespace shape
{

using std::numbers::pi;

double value(const Vec3 &x)
{
  return std::sin(pi * x.x()) * std::sin(pi * x.y());
}

Vec3 field(const Vec3 &x)
{
  return {0.0, 0.0, value(x)};
}

Vec3 curl(const Vec3 &x)
{
  const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
  const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
  return {pi * sx * cy, -pi * cx * sy, 0.0};
}

double eigenvalue()
{
  return 2.0 * pi * pi;
}

double l2_sq()
{
  return 0.25;
}

double curl_sq()
{
  return 0.5 * pi * pi;
}

}  // namespace shape

ExpTrigSignal paper_forward_signal()
{
  const double c = shape::eigenvalue() + 1.0;
  return ExpTrigSignal({{1.0, 1.0, 1.0, c}});
}

ExpTrigSignal paper_ocp_signal()
{
  const double c = shape::eigenvalue() + 1.0;
  return ExpTrigSignal({{1.0, 1.0, -c, 1.0 + c * c}});
}

ReferenceSolution ReferenceSolution::forward(const ExpTrigSignal &u, double sigma, double nu,
                                             const PeriodSpec &period, int tail_modes)
{
  ReferenceSolution r;
  r.period_ = period;
  const double kappa = nu * shape::eigenvalue();
  for (int k = 0; k <= tail_modes; k++)
  {
    const TrigCoeffs g = u.exact_coeff(k, period);
    if (k == 0)
    {
      r.state_.push_back({g.c / kappa, 0.0});
      continue;
    }
    // [[kappa, m], [-m, kappa]] (a^c, a^s) = (g^c, g^s)
    const double m = k * period.omega() * sigma;
    const double det = kappa * kappa + m * m;
    r.state_.push_back({(kappa * g.c - m * g.s) / det, (m * g.c + kappa * g.s) / det});
  }
  return r;
}

ReferenceSolution ReferenceSolution::ocp(const ExpTrigSignal &yd, double sigma, double nu,
                                         double alpha, const PeriodSpec &period, int tail_modes)
{
  ReferenceSolution r;
  r.period_ = period;
  r.has_adjoint_ = true;
  const double kappa = nu * shape::eigenvalue();
  const double ia = 1.0 / alpha;
  for (int k = 0; k <= tail_modes; k++)
  {
    const TrigCoeffs g = yd.exact_coeff(k, period);
    if (k == 0)
    {
      // y - kappa p = g, -kappa y - p / alpha = 0
      Eigen::Matrix2d a;
      a << 1.0, -kappa, -kappa, -ia;
      const Eigen::Vector2d x = a.fullPivLu().solve(Eigen::Vector2d(g.c, 0.0));
      r.state_.push_back({x[0], 0.0});
      r.adjoint_.push_back({x[1], 0.0});
      continue;
    }
    const double m = k * period.omega() * sigma;
    Eigen::Matrix4d a;
    a << 1.0, 0.0, -kappa, m,  //
        0.0, 1.0, -m, -kappa,  //
        -kappa, -m, -ia, 0.0,  //
        m, -kappa, 0.0, -ia;
    const Eigen::Vector4d x = a.fullPivLu().solve(Eigen::Vector4d(g.c, g.s, 0.0, 0.0));
    r.state_.push_back({x[0], x[1]});
    r.adjoint_.push_back({x[2], x[3]});
  }
  return r;
}

namespace
{

// ||a S e_z - v||^2 and ||curl(a S e_z - v)||^2 by the degree-5 rule.
ModeNorms component_error(const EdgeSpace &space, double a, const Vector &v)
{
  ModeNorms n;
  n.l2_sq = integrate_sq(space, [&](const PointContext &p)
                         { return Vec3(a * shape::field(p.x) - space.value(v, p.tet, p.bary)); });
  n.curl_sq = integrate_sq(space, [&](const PointContext &p)
                           { return Vec3(a * shape::curl(p.x) - space.curl(v, p.tet)); });
  return n;
}

ModeNorms analytic_norms(const ModeAmplitude &a, int k)
{
  const double amp = a.c * a.c + (k == 0 ? 0.0 : a.s * a.s);
  return {amp * shape::l2_sq(), amp * shape::curl_sq()};
}

void accumulate(ErrorQuantity &e, const ModeNorms &n, int k, const PeriodSpec &period)
{
  const double tw = time_weight(k, period);
  const double kw = k * period.omega();
  e.seminorm_sq += tw * (kw * n.l2_sq + n.curl_sq);
  e.norm_sq += tw * ((k == 0 ? 1.0 : 1.0 + kw) * n.l2_sq + n.curl_sq);
}

}  // namespace

ErrorQuantity ReferenceSolution::mode_error(const EdgeSpace &space, int k, const Vector &state_cos,
                                            const Vector &state_sin, const Vector *adjoint_cos,
                                            const Vector *adjoint_sin) const
{
  ErrorQuantity e;
  auto add_field = [&](const ModeAmplitude &a, const Vector &vc, const Vector *vs)
  {
    ModeNorms n = component_error(space, a.c, vc);
    if (k > 0)
    {
      const ModeNorms ns = component_error(space, a.s, *vs);
      n.l2_sq += ns.l2_sq;
      n.curl_sq += ns.curl_sq;
    }
    accumulate(e, n, k, period_);
  };
  add_field(state(k), state_cos, &state_sin);
  if (has_adjoint_ && adjoint_cos)
  {
    add_field(adjoint(k), *adjoint_cos, adjoint_sin);
  }
  return e;
}

ErrorQuantity ReferenceSolution::error(const EdgeSpace &space, const FourierField &state,
                                       const FourierField *adjoint) const
{
  ErrorQuantity e;
  const int n = state.truncation();
  for (int k = 0; k <= n; k++)
  {
    const Vector &sc = k == 0 ? state.mode0 : state.mode(k).cos;
    const Vector &ss = k == 0 ? state.mode0 : state.mode(k).sin;
    const Vector *ac = nullptr, *as = nullptr;
    if (adjoint)
    {
      ac = k == 0 ? &adjoint->mode0 : &adjoint->mode(k).cos;
      as = k == 0 ? &adjoint->mode0 : &adjoint->mode(k).sin;
    }
    const ErrorQuantity ek = mode_error(space, k, sc, ss, ac, as);
    e.seminorm_sq += ek.seminorm_sq;
    e.norm_sq += ek.norm_sq;
  }
  // Tail beyond the truncation, summed from the smallest terms up.
  ErrorQuantity tail;
  for (int k = modes(); k > n; k--)
  {
    accumulate(tail, analytic_norms(state_[k], k), k, period_);
    if (has_adjoint_ && adjoint)
    {
      accumulate(tail, analytic_norms(adjoint_[k], k), k, period_);
    }
  }
  e.seminorm_sq += tail.seminorm_sq;
  e.norm_sq += tail.norm_sq;
  return e;
}

}  // namespace mheddy

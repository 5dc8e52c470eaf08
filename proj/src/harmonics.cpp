// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/harmonics.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "mheddy/quadrature.hpp"

namespace mheddy
{

PeriodSpec PeriodSpec::make(double period, int truncation)
{
  PeriodSpec p{period, truncation};
  p.validate();
  return p;
}

double PeriodSpec::omega() const
{
  return 2.0 * std::numbers::pi / period;
}

void PeriodSpec::validate() const
{
  if (!(period > 0.0) || !std::isfinite(period))
  {
    throw ConfigError("period must be positive");
  }
  if (truncation < 0)
  {
    throw ConfigError("truncation index must be nonnegative");
  }
}

FourierField FourierField::zeros(Eigen::Index dim, int truncation)
{
  FourierField f;
  f.mode0 = Vector::Zero(dim);
  f.modes.assign(truncation, ModeCoeffs{Vector::Zero(dim), Vector::Zero(dim)});
  return f;
}

FourierField FourierField::perp() const
{
  FourierField p;
  p.mode0 = Vector::Zero(dim());
  p.modes.reserve(modes.size());
  for (const auto &m : modes)
  {
    p.modes.push_back({-m.sin, m.cos});
  }
  return p;
}

Vector FourierField::evaluate(double t, double omega) const
{
  Vector v = mode0;
  for (int k = 1; k <= truncation(); k++)
  {
    const auto &m = modes[k - 1];
    v += std::cos(k * omega * t) * m.cos + std::sin(k * omega * t) * m.sin;
  }
  return v;
}

double time_weight(int k, const PeriodSpec &period)
{
  return k == 0 ? period.period : 0.5 * period.period;
}

TrigCoeffs fourier_coeff(const TimeSignal &g, int k, const PeriodSpec &period,
                         const TimeQuadrature &quad)
{
  if (k < 0)
  {
    throw ConfigError("fourier_coeff: k must be nonnegative");
  }
  if (quad.panels * quad.points < 4 * (k + 1))
  {
    throw ConfigError("fourier_coeff: too few quadrature samples for mode " + std::to_string(k));
  }
  const double T = period.period;
  const double w = period.omega();
  const LineRule rule = composite_gauss(0.0, T, quad.panels, quad.points);
  double c = 0.0, s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); i++)
  {
    const double t = rule.nodes[i];
    const double gt = g(t);
    if (!std::isfinite(gt))
    {
      throw std::domain_error("fourier_coeff: non-finite signal value");
    }
    c += rule.weights[i] * gt * std::cos(k * w * t);
    s += rule.weights[i] * gt * std::sin(k * w * t);
  }
  if (k == 0)
  {
    return {c / T, 0.0};
  }
  return {2.0 * c / T, 2.0 * s / T};
}

double remainder(const TimeSignal &g, double spatial_norm_sq, const PeriodSpec &period,
                 const TimeQuadrature &quad)
{
  const double T = period.period;
  const LineRule rule = composite_gauss(0.0, T, quad.panels, quad.points);
  double energy = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); i++)
  {
    const double gt = g(rule.nodes[i]);
    if (!std::isfinite(gt))
    {
      throw std::domain_error("remainder: non-finite signal value");
    }
    energy += rule.weights[i] * gt * gt;
  }
  const TrigCoeffs c0 = fourier_coeff(g, 0, period, quad);
  double tail = energy - T * c0.c * c0.c;
  for (int k = 1; k <= period.truncation; k++)
  {
    const TrigCoeffs ck = fourier_coeff(g, k, period, quad);
    tail -= 0.5 * T * (ck.c * ck.c + ck.s * ck.s);
  }
  if (tail < 0.0)
  {
    if (tail < -1e-10 * energy)
    {
      throw SolverError("remainder: truncated energy exceeds total energy");
    }
    tail = 0.0;
  }
  return tail * spatial_norm_sq;
}

namespace
{

// int_0^T e^{z t} dt for complex z.
std::complex<double> exp_integral(std::complex<double> z, double T)
{
  const std::complex<double> zt = z * T;
  if (std::abs(zt) < 1e-5)
  {
    return T * (1.0 + zt / 2.0 + zt * zt / 6.0 + zt * zt * zt / 24.0);
  }
  return (std::exp(zt) - 1.0) / z;
}

// int_0^T e^{a t} f(b t) h(c t) dt with f, h in {cos, sin}.
double product_integral(double a, double b, bool b_sin, double c, bool c_sin, double T)
{
  const auto fp = exp_integral({a, b + c}, T);
  const auto fm = exp_integral({a, b - c}, T);
  if (!b_sin && !c_sin)
  {
    return 0.5 * (fp.real() + fm.real());
  }
  if (b_sin && !c_sin)
  {
    return 0.5 * (fp.imag() + fm.imag());
  }
  if (!b_sin && c_sin)
  {
    return 0.5 * (fp.imag() - fm.imag());
  }
  return 0.5 * (fm.real() - fp.real());
}

}  // namespace

double ExpTrigSignal::operator()(double t) const
{
  double v = 0.0;
  for (const auto &term : terms_)
  {
    v += std::exp(term.rate * t) *
         (term.cos_amp * std::cos(term.freq * t) + term.sin_amp * std::sin(term.freq * t));
  }
  return v;
}

TimeSignal ExpTrigSignal::signal() const
{
  return [self = *this](double t) { return self(t); };
}

TrigCoeffs ExpTrigSignal::exact_coeff(int k, const PeriodSpec &period) const
{
  const double T = period.period;
  const double kw = k * period.omega();
  double c = 0.0, s = 0.0;
  for (const auto &term : terms_)
  {
    const double a = term.rate, b = term.freq;
    c += term.cos_amp * product_integral(a, b, false, kw, false, T) +
         term.sin_amp * product_integral(a, b, true, kw, false, T);
    s += term.cos_amp * product_integral(a, b, false, kw, true, T) +
         term.sin_amp * product_integral(a, b, true, kw, true, T);
  }
  if (k == 0)
  {
    return {c / T, 0.0};
  }
  return {2.0 * c / T, 2.0 * s / T};
}

double ExpTrigSignal::exact_energy(const PeriodSpec &period) const
{
  const double T = period.period;
  double e = 0.0;
  for (const auto &p : terms_)
  {
    for (const auto &q : terms_)
    {
      const double a = p.rate + q.rate;
      e += p.cos_amp * q.cos_amp * product_integral(a, p.freq, false, q.freq, false, T) +
           p.cos_amp * q.sin_amp * product_integral(a, p.freq, false, q.freq, true, T) +
           p.sin_amp * q.cos_amp * product_integral(a, p.freq, true, q.freq, false, T) +
           p.sin_amp * q.sin_amp * product_integral(a, p.freq, true, q.freq, true, T);
    }
  }
  return e;
}

HalfTimeProducts halftime_products(const FourierField &y, const FourierField &v,
                                   const SparseSym &weight, const PeriodSpec &period)
{
  if (y.truncation() != v.truncation() || y.dim() != v.dim() || weight.rows() != y.dim())
  {
    throw std::invalid_argument("halftime_products: dimension mismatch");
  }
  const double w = period.omega();
  HalfTimeProducts h;
  for (int k = 1; k <= y.truncation(); k++)
  {
    const auto &yk = y.mode(k);
    const auto &vk = v.mode(k);
    const Vector mc = weight * vk.cos;
    const Vector ms = weight * vk.sin;
    h.plain += k * w * (yk.cos.dot(mc) + yk.sin.dot(ms));
    h.perp += k * w * (-yk.cos.dot(ms) + yk.sin.dot(mc));
  }
  h.plain *= 0.5 * period.period;
  h.perp *= 0.5 * period.period;
  return h;
}

SpaceTimeNorms spacetime_norms(const std::vector<ModeNorms> &modes, const PeriodSpec &period)
{
  SpaceTimeNorms n;
  const double w = period.omega();
  for (std::size_t k = 0; k < modes.size(); k++)
  {
    const double tw = time_weight(static_cast<int>(k), period);
    if (k == 0)
    {
      n.seminorm_sq += tw * modes[0].curl_sq;
      n.norm_sq += tw * (modes[0].l2_sq + modes[0].curl_sq);
    }
    else
    {
      n.seminorm_sq += tw * (k * w * modes[k].l2_sq + modes[k].curl_sq);
      n.norm_sq += tw * ((1.0 + k * w) * modes[k].l2_sq + modes[k].curl_sq);
    }
  }
  return n;
}

SpaceTimeNorms spacetime_norms(const FourierField &e, const SparseSym &mass,
                               const SparseSym &curl_curl, const PeriodSpec &period)
{
  std::vector<ModeNorms> modes;
  modes.push_back({e.mode0.dot(mass * e.mode0), e.mode0.dot(curl_curl * e.mode0)});
  for (const auto &m : e.modes)
  {
    modes.push_back({m.cos.dot(mass * m.cos) + m.sin.dot(mass * m.sin),
                     m.cos.dot(curl_curl * m.cos) + m.sin.dot(curl_curl * m.sin)});
  }
  return spacetime_norms(modes, period);
}

}  // namespace mheddy

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_HARMONICS_HPP
#define MHEDDY_HARMONICS_HPP

#include <functional>
#include <vector>

#include "mheddy/types.hpp"

namespace mheddy
{

struct PeriodSpec
{
  double period = 2.0 * 3.14159265358979323846;
  int truncation = 1;

  static PeriodSpec make(double period, int truncation);

  double omega() const;
  void validate() const;
};

// Composite Gauss-Legendre over one period.
struct TimeQuadrature
{
  int panels = 10;
  int points = 8;
};

struct ModeCoeffs
{
  Vector cos;
  Vector sin;
};

//
// Truncated real Fourier series of a spatial field: v(t) = v0 + sum_k v_k^c cos(k w t) +
// v_k^s sin(k w t). modes[k - 1] holds mode k.
//
struct FourierField
{
  Vector mode0;
  std::vector<ModeCoeffs> modes;

  static FourierField zeros(Eigen::Index dim, int truncation);

  int truncation() const { return static_cast<int>(modes.size()); }
  Eigen::Index dim() const { return mode0.size(); }

  const ModeCoeffs &mode(int k) const { return modes.at(k - 1); }
  ModeCoeffs &mode(int k) { return modes.at(k - 1); }

  // (c, s) -> (-s, c) modewise; the mean has no perpendicular partner and maps to 0.
  FourierField perp() const;

  Vector evaluate(double t, double omega) const;
};

struct TrigCoeffs
{
  double c = 0.0;
  double s = 0.0;
};

using TimeSignal = std::function<double(double)>;

// Coefficients (2/T) int g cos, (2/T) int g sin; for k = 0 the mean (1/T) int g and 0.
TrigCoeffs fourier_coeff(const TimeSignal &g, int k, const PeriodSpec &period,
                         const TimeQuadrature &quad = {});

// Parseval tail of separable data g(t) s(x) beyond mode N, times ||s||^2.
double remainder(const TimeSignal &g, double spatial_norm_sq, const PeriodSpec &period,
                 const TimeQuadrature &quad = {});

//
// Sum of terms e^{a t} (A cos(b t) + B sin(b t)). Its Fourier coefficients are available
// in closed form, which the reference solutions and the tail sums rely on.
//
struct ExpTrigTerm
{
  double rate = 0.0;
  double freq = 0.0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

class ExpTrigSignal
{
public:
  ExpTrigSignal() = default;
  explicit ExpTrigSignal(std::vector<ExpTrigTerm> terms) : terms_(std::move(terms)) {}

  double operator()(double t) const;
  TimeSignal signal() const;

  TrigCoeffs exact_coeff(int k, const PeriodSpec &period) const;

  // int_0^T g^2 dt in closed form.
  double exact_energy(const PeriodSpec &period) const;

  const std::vector<ExpTrigTerm> &terms() const { return terms_; }

private:
  std::vector<ExpTrigTerm> terms_;
};

struct HalfTimeProducts
{
  double plain = 0.0;
  double perp = 0.0;
};

// plain = (T/2) sum_k k w (y_k^c.Mv_k^c + y_k^s.Mv_k^s); perp uses v^perp in place of v.
HalfTimeProducts halftime_products(const FourierField &y, const FourierField &v,
                                   const SparseSym &weight, const PeriodSpec &period);

struct SpaceTimeNorms
{
  double seminorm_sq = 0.0;
  double norm_sq = 0.0;
};

// Per-mode spatial ingredients ||v_k||^2 and ||curl v_k||^2, index 0 for the mean.
struct ModeNorms
{
  double l2_sq = 0.0;
  double curl_sq = 0.0;
};

SpaceTimeNorms spacetime_norms(const std::vector<ModeNorms> &modes, const PeriodSpec &period);

SpaceTimeNorms spacetime_norms(const FourierField &e, const SparseSym &mass,
                               const SparseSym &curl_curl, const PeriodSpec &period);

// Time weight of mode k in space-time sums: T for the mean, T/2 otherwise.
double time_weight(int k, const PeriodSpec &period);

}  // namespace mheddy

#endif  // MHEDDY_HARMONICS_HPP

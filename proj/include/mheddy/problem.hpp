// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_PROBLEM_HPP
#define MHEDDY_PROBLEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "mheddy/edge_fem.hpp"
#include "mheddy/estimator.hpp"
#include "mheddy/harmonics.hpp"

namespace mheddy
{

//
// Data of the form g(t) S(x) e_z on the unit cube with S = sin(pi x) sin(pi y). The field
// S e_z is divergence free, has vanishing tangential trace on the boundary, and satisfies
// curl curl (S e_z) = 2 pi^2 S e_z.
//
namespace shape
{

double value(const Vec3 &x);
Vec3 field(const Vec3 &x);
Vec3 curl(const Vec3 &x);

double eigenvalue();  // 2 pi^2
double l2_sq();       // ||S e_z||^2 = 1/4
double curl_sq();     // ||curl S e_z||^2 = pi^2 / 2

}  // namespace shape

// e^t (cos t + (2 pi^2 + 1) sin t): drives the state e^t sin t when sigma = nu = 1.
ExpTrigSignal paper_forward_signal();

// e^t (sin t + c (c sin t - cos t)) with c = 2 pi^2 + 1.
ExpTrigSignal paper_ocp_signal();

struct ModeAmplitude
{
  double c = 0.0;
  double s = 0.0;
};

//
// Mode-by-mode exact solution for separable data with constant sigma and nu on the unit
// cube. Each mode reduces to a small dense system for the amplitudes of S e_z.
//
class ReferenceSolution
{
public:
  static ReferenceSolution forward(const ExpTrigSignal &u, double sigma, double nu,
                                   const PeriodSpec &period, int tail_modes = 20000);
  static ReferenceSolution ocp(const ExpTrigSignal &yd, double sigma, double nu, double alpha,
                               const PeriodSpec &period, int tail_modes = 20000);

  bool has_adjoint() const { return has_adjoint_; }
  ModeAmplitude state(int k) const { return state_.at(k); }
  ModeAmplitude adjoint(int k) const { return adjoint_.at(k); }
  int modes() const { return static_cast<int>(state_.size()) - 1; }

  // Squared space-time (semi)norms of the error of a discrete approximation given by
  // coefficients over all edges; modes beyond its truncation count as missed entirely.
  ErrorQuantity error(const EdgeSpace &space, const FourierField &state,
                      const FourierField *adjoint = nullptr) const;

  // Contribution of the single mode k.
  ErrorQuantity mode_error(const EdgeSpace &space, int k, const Vector &state_cos,
                           const Vector &state_sin, const Vector *adjoint_cos = nullptr,
                           const Vector *adjoint_sin = nullptr) const;

private:
  PeriodSpec period_;
  bool has_adjoint_ = false;
  std::vector<ModeAmplitude> state_;
  std::vector<ModeAmplitude> adjoint_;
};

}  // namespace mheddy

#endif  // MHEDDY_PROBLEM_HPP

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_QUADRATURE_HPP
#define MHEDDY_QUADRATURE_HPP

#include <vector>

#include "mheddy/types.hpp"

namespace mheddy
{

// Symmetric tetrahedral rule in barycentric coordinates. Weights sum to one, so an
// integral over a tet is volume * sum_q w_q f(x_q).
struct TetRule
{
  std::vector<Bary> points;
  std::vector<double> weights;
  int degree = 0;
};

// 4 points, exact for quadratics.
const TetRule &tet_rule_degree2();

// 14 points, exact for quintics.
const TetRule &tet_rule_degree5();

// Gauss-Legendre nodes and weights on [-1, 1].
struct LineRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

LineRule gauss_legendre(int n);

// Composite Gauss-Legendre on [a, b]: `panels` equal panels with `points` nodes each.
LineRule composite_gauss(double a, double b, int panels, int points);

}  // namespace mheddy

#endif  // MHEDDY_QUADRATURE_HPP

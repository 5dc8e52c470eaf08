// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace mheddy
{

namespace
{

void add_orbit_4(TetRule &rule, double a, double w)
{
  const double b = 1.0 - 3.0 * a;
  for (int i = 0; i < 4; i++)
  {
    Bary p = {a, a, a, a};
    p[i] = b;
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
}

void add_orbit_6(TetRule &rule, double a, double w)
{
  const double b = 0.5 - a;
  static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (const auto &pr : pairs)
  {
    Bary p = {b, b, b, b};
    p[pr[0]] = a;
    p[pr[1]] = a;
    rule.points.push_back(p);
    rule.weights.push_back(w);
  }
}

TetRule make_degree2()
{
  TetRule rule;
  rule.degree = 2;
  add_orbit_4(rule, 0.1381966011250105151795413165634, 0.25);
  return rule;
}

TetRule make_degree5()
{
  // Weights below are relative to the unit reference volume 1/6, hence the factor 6.
  TetRule rule;
  rule.degree = 5;
  add_orbit_4(rule, 0.092735250310891224343, 6.0 * 0.012248840519393657664);
  add_orbit_4(rule, 0.3108859192633006091, 6.0 * 0.018781320953002640513);
  add_orbit_6(rule, 0.04550370412564965853, 6.0 * 0.0070910034628469123266);
  return rule;
}

}  // namespace

const TetRule &tet_rule_degree2()
{
  static const TetRule rule = make_degree2();
  return rule;
}

const TetRule &tet_rule_degree5()
{
  static const TetRule rule = make_degree5();
  return rule;
}

LineRule gauss_legendre(int n)
{
  if (n < 1)
  {
    throw ConfigError("gauss_legendre: need at least one point");
  }
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const unsigned un = static_cast<unsigned>(n);
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; it++)
    {
      const double p = std::legendre(un, x);
      const double pm = (n > 1) ? std::legendre(un - 1, x) : 1.0;
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    const double p = std::legendre(un, x);
    const double pm = (n > 1) ? std::legendre(un - 1, x) : 1.0;
    dp = n * (x * p - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
  {
    rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

LineRule composite_gauss(double a, double b, int panels, int points)
{
  if (panels < 1 || !(b > a))
  {
    throw ConfigError("composite_gauss: need panels >= 1 and b > a");
  }
  const LineRule base = gauss_legendre(points);
  LineRule rule;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; p++)
  {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < points; i++)
    {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

}  // namespace mheddy

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mheddy/quadrature.hpp"

using namespace mheddy;

namespace
{

double factorial(int n)
{
  return std::tgamma(n + 1.0);
}

// Integral of x^a y^b z^c over the unit reference tet, divided by its volume 1/6.
double monomial_mean(int a, int b, int c)
{
  return 6.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

double rule_mean(const TetRule &rule, int a, int b, int c)
{
  double s = 0.0;
  for (size_t q = 0; q < rule.points.size(); q++)
  {
    const auto &l = rule.points[q];
    s += rule.weights[q] * std::pow(l[1], a) * std::pow(l[2], b) * std::pow(l[3], c);
  }
  return s;
}

void check_exactness(const TetRule &rule)
{
  double wsum = 0.0;
  for (size_t q = 0; q < rule.points.size(); q++)
  {
    wsum += rule.weights[q];
    CHECK(rule.weights[q] > 0.0);
    double lsum = 0.0;
    for (double l : rule.points[q])
    {
      CHECK(l >= 0.0);
      lsum += l;
    }
    CHECK(lsum == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  for (int a = 0; a <= rule.degree; a++)
  {
    for (int b = 0; a + b <= rule.degree; b++)
    {
      for (int c = 0; a + b + c <= rule.degree; c++)
      {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CHECK(rule_mean(rule, a, b, c) == doctest::Approx(monomial_mean(a, b, c)).epsilon(1e-13));
      }
    }
  }
}

}  // namespace

TEST_CASE("tet rules integrate monomials up to their degree")
{
  CHECK(tet_rule_degree2().degree == 2);
  CHECK(tet_rule_degree5().degree == 5);
  check_exactness(tet_rule_degree2());
  check_exactness(tet_rule_degree5());
}

TEST_CASE("degree 5 rule is not exact at degree 6")
{
  const auto &rule = tet_rule_degree5();
  CHECK(std::abs(rule_mean(rule, 6, 0, 0) - monomial_mean(6, 0, 0)) > 1e-8);
}

TEST_CASE("gauss-legendre three point rule")
{
  const LineRule g = gauss_legendre(3);
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.nodes[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(g.nodes[1] == doctest::Approx(0.0));
  CHECK(g.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(g.weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(g.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("gauss-legendre is exact to degree 2n-1")
{
  for (int n = 1; n <= 12; n++)
  {
    const LineRule g = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; p++)
    {
      double s = 0.0;
      for (int i = 0; i < n; i++)
      {
        s += g.weights[i] * std::pow(g.nodes[i], p);
      }
      const double exact = (p % 2 == 0) ? 2.0 / (p + 1) : 0.0;
      CAPTURE(n);
      CAPTURE(p);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), ConfigError);
}

TEST_CASE("composite gauss on a smooth periodic integrand")
{
  const double T = 2.0 * std::numbers::pi;
  const LineRule g = composite_gauss(0.0, T, 10, 8);
  double s = 0.0;
  for (size_t i = 0; i < g.nodes.size(); i++)
  {
    s += g.weights[i] * std::exp(g.nodes[i]);
  }
  CHECK(s == doctest::Approx(std::exp(T) - 1.0).epsilon(1e-13));
  CHECK_THROWS_AS(composite_gauss(1.0, 1.0, 3, 3), ConfigError);
  CHECK_THROWS_AS(composite_gauss(0.0, 1.0, 0, 3), ConfigError);
}

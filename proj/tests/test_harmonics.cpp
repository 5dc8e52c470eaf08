// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mheddy/edge_fem.hpp"
#include "mheddy/harmonics.hpp"
#include "mheddy/oracles.hpp"
#include "support.hpp"

using namespace mheddy;
using testing::random_vector;

namespace
{

constexpr double kPi = std::numbers::pi;

FourierField random_field(std::mt19937 &rng, Eigen::Index dim, int truncation)
{
  FourierField f = FourierField::zeros(dim, truncation);
  f.mode0 = random_vector(rng, dim);
  for (auto &m : f.modes)
  {
    m.cos = random_vector(rng, dim);
    m.sin = random_vector(rng, dim);
  }
  return f;
}

SparseSym random_spd(std::mt19937 &rng, Eigen::Index n)
{
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    a.row(i) = random_vector(rng, n).transpose();
  }
  Eigen::MatrixXd s = a * a.transpose() + Eigen::MatrixXd::Identity(n, n);
  return s.sparseView();
}

}  // namespace

TEST_CASE("period spec")
{
  const PeriodSpec p = PeriodSpec::make(3.0, 2);
  CHECK(p.omega() * p.period == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(PeriodSpec{}.omega() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(PeriodSpec::make(0.0, 1), ConfigError);
  CHECK_THROWS_AS(PeriodSpec::make(1.0, -1), ConfigError);
}

TEST_CASE("fourier coefficients of simple signals")
{
  const PeriodSpec p = PeriodSpec::make(2.0 * kPi, 3);
  const TrigCoeffs c1 = fourier_coeff([](double t) { return std::cos(t); }, 1, p);
  CHECK(c1.c == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(c1.s) < 1e-12);
  const auto one = [](double) { return 1.0; };
  CHECK(fourier_coeff(one, 0, p).c == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 1; k <= 3; k++)
  {
    const TrigCoeffs ck = fourier_coeff(one, k, p);
    CHECK(std::abs(ck.c) < 1e-13);
    CHECK(std::abs(ck.s) < 1e-13);
  }
}

TEST_CASE("fourier coefficients of e^t sin t")
{
  const PeriodSpec p = PeriodSpec::make(2.0 * kPi, 1);
  const auto g = [](double t) { return std::exp(t) * std::sin(t); };
  const double e = std::exp(2.0 * kPi);
  const TrigCoeffs c1 = fourier_coeff(g, 1, p);
  CHECK(c1.c == doctest::Approx((1.0 - e) / (5.0 * kPi)).epsilon(1e-10));
  CHECK(c1.s == doctest::Approx(2.0 / (5.0 * kPi) * (e - 1.0)).epsilon(1e-10));
  // Same values from the closed form used for the reference solution.
  const ExpTrigSignal sig({{1.0, 1.0, 0.0, 1.0}});
  const TrigCoeffs x1 = sig.exact_coeff(1, p);
  CHECK(x1.c == doctest::Approx((1.0 - e) / (5.0 * kPi)).epsilon(1e-13));
  CHECK(x1.s == doctest::Approx(2.0 / (5.0 * kPi) * (e - 1.0)).epsilon(1e-13));
}

TEST_CASE("closed-form coefficients agree with quadrature")
{
  const PeriodSpec p = PeriodSpec::make(2.0 * kPi, 4);
  const ExpTrigSignal sig({{1.0, 1.0, 0.5, 1.0}, {-0.3, 2.0, 1.0, 0.0}, {0.0, 0.0, 2.0, 0.0}});
  const TimeQuadrature fine{40, 10};
  for (int k = 0; k <= 4; k++)
  {
    const TrigCoeffs a = sig.exact_coeff(k, p);
    const TrigCoeffs b = fourier_coeff(sig.signal(), k, p, fine);
    CAPTURE(k);
    CHECK(a.c == doctest::Approx(b.c).epsilon(1e-11).scale(1.0));
    CHECK(a.s == doctest::Approx(b.s).epsilon(1e-11).scale(1.0));
  }
  CHECK(sig.exact_energy(p) ==
        doctest::Approx(oracle::time_integral([&](double t) { return sig(t) * sig(t); }, p.period))
            .epsilon(1e-12));
}

TEST_CASE("fourier coefficient input checks")
{
  const PeriodSpec p = PeriodSpec::make(1.0, 1);
  CHECK_THROWS_AS(fourier_coeff([](double) { return 1.0; }, 5, p, {2, 2}), ConfigError);
  CHECK_THROWS_AS(fourier_coeff([](double) { return 1.0; }, -1, p), ConfigError);
  CHECK_THROWS_AS(
      fourier_coeff([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 1, p),
      std::domain_error);
  CHECK_THROWS_AS(remainder([](double) { return std::numeric_limits<double>::infinity(); }, 1.0, p),
                  std::domain_error);
}

TEST_CASE("remainder of pure harmonics")
{
  const PeriodSpec p1 = PeriodSpec::make(2.0 * kPi, 1);
  CHECK(remainder([](double t) { return std::sin(t); }, 3.0, p1) == doctest::Approx(0.0));
  CHECK(remainder([](double t) { return std::sin(t); }, 3.0, PeriodSpec::make(2.0 * kPi, 4)) ==
        doctest::Approx(0.0));
  // sin t + sin 2t cut at N = 1 leaves (T/2) ||s||^2.
  const double r = remainder([](double t) { return std::sin(t) + std::sin(2.0 * t); }, 3.0, p1);
  CHECK(r == doctest::Approx(kPi * 3.0).epsilon(1e-12));
}

TEST_CASE("remainder of e^t sin t against the summed tail")
{
  const ExpTrigSignal sig({{1.0, 1.0, 0.0, 1.0}});
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= 3; n++)
  {
    const PeriodSpec p = PeriodSpec::make(2.0 * kPi, n);
    const double r = remainder(sig.signal(), 1.0, p);
    double tail = 0.0;
    // Coefficients decay like 1/k^2, so the sum is carried far enough to leave a 1e-8 tail.
    for (int k = n + 1; k <= 20000; k++)
    {
      const TrigCoeffs c = sig.exact_coeff(k, p);
      tail += 0.5 * p.period * (c.c * c.c + c.s * c.s);
    }
    CAPTURE(n);
    CHECK(r == doctest::Approx(tail).epsilon(1e-6));
    CHECK(r <= previous);
    previous = r;
  }
}

TEST_CASE("perp map")
{
  std::mt19937 rng(4);
  const FourierField v = random_field(rng, 5, 3);
  const FourierField pp = v.perp().perp();
  CHECK(pp.mode0.norm() == 0.0);
  for (int k = 1; k <= 3; k++)
  {
    CHECK((pp.mode(k).cos + v.mode(k).cos).norm() == 0.0);
    CHECK((pp.mode(k).sin + v.mode(k).sin).norm() == 0.0);
    CHECK(v.perp().mode(k).cos.norm() == doctest::Approx(v.mode(k).sin.norm()));
  }
}

TEST_CASE("evaluation matches the series")
{
  std::mt19937 rng(8);
  const FourierField v = random_field(rng, 3, 2);
  Vector at0 = v.mode0;
  for (const auto &m : v.modes)
  {
    at0 += m.cos;
  }
  CHECK((v.evaluate(0.0, 1.0) - at0).norm() <= 1e-14);
  CHECK((v.evaluate(2.0 * kPi, 1.0) - at0).norm() <= 1e-13);
}

TEST_CASE("half-time products against time quadrature")
{
  std::mt19937 rng(12);
  const PeriodSpec p = PeriodSpec::make(3.0, 3);
  const double w = p.omega();
  const SparseSym m = random_spd(rng, 4);
  for (int trial = 0; trial < 3; trial++)
  {
    const FourierField y = random_field(rng, 4, 3);
    const FourierField v = random_field(rng, 4, 3);
    const FourierField vp = v.perp();
    const auto dy = [&](double t)
    {
      Vector d = Vector::Zero(4);
      for (int k = 1; k <= 3; k++)
      {
        d += k * w * (-std::sin(k * w * t) * y.mode(k).cos + std::cos(k * w * t) * y.mode(k).sin);
      }
      return d;
    };
    // (M dt y, v) integrated over a period is the perp product; against v^perp it is -plain.
    const double perp = oracle::time_integral(
        [&](double t) { return dy(t).dot(m * v.evaluate(t, w)); }, p.period);
    const double plain = -oracle::time_integral(
        [&](double t) { return dy(t).dot(m * vp.evaluate(t, w)); }, p.period);
    const HalfTimeProducts h = halftime_products(y, v, m, p);
    CHECK(h.perp == doctest::Approx(perp).epsilon(1e-11));
    CHECK(h.plain == doctest::Approx(plain).epsilon(1e-11));
    // Perp product of a field with itself vanishes.
    CHECK(std::abs(halftime_products(y, y, m, p).perp) <= 1e-12 * std::abs(h.plain));
    // Symmetry of the plain product.
    CHECK(halftime_products(v, y, m, p).plain == doctest::Approx(h.plain).epsilon(1e-13));
  }
  CHECK_THROWS(halftime_products(random_field(rng, 4, 2), random_field(rng, 4, 3), m, p));
}

TEST_CASE("space-time norms")
{
  const PeriodSpec p = PeriodSpec::make(2.0 * kPi, 1);
  const SpaceTimeNorms z = spacetime_norms(std::vector<ModeNorms>{{0.0, 0.0}, {0.0, 0.0}}, p);
  CHECK(z.seminorm_sq == 0.0);
  CHECK(z.norm_sq == 0.0);
  const SpaceTimeNorms one = spacetime_norms(std::vector<ModeNorms>{{0.0, 0.0}, {1.0, 0.0}}, p);
  CHECK(one.seminorm_sq == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(one.norm_sq == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(time_weight(0, p) == doctest::Approx(2.0 * kPi));
  CHECK(time_weight(3, p) == doctest::Approx(kPi));
}

TEST_CASE("space-time norms against time quadrature")
{
  std::mt19937 rng(21);
  const PeriodSpec p = PeriodSpec::make(1.7, 2);
  const double w = p.omega();
  const SparseSym m = random_spd(rng, 3);
  const SparseSym k = random_spd(rng, 3);
  const FourierField e = random_field(rng, 3, 2);
  const FourierField ep = e.perp();
  const SpaceTimeNorms n = spacetime_norms(e, m, k, p);
  const double l2 =
      oracle::time_integral([&](double t) { Vector v = e.evaluate(t, w); return v.dot(m * v); },
                            p.period);
  const double curl =
      oracle::time_integral([&](double t) { Vector v = e.evaluate(t, w); return v.dot(k * v); },
                            p.period);
  // The half-time term is (dt e, e^perp) with a minus sign.
  const double half = halftime_products(e, e, m, p).plain;
  const double half_q = -oracle::time_integral(
      [&](double t)
      {
        Vector d = Vector::Zero(3);
        for (int j = 1; j <= 2; j++)
        {
          d += j * w * (-std::sin(j * w * t) * e.mode(j).cos + std::cos(j * w * t) * e.mode(j).sin);
        }
        return d.dot(m * ep.evaluate(t, w));
      },
      p.period);
  CHECK(half == doctest::Approx(half_q).epsilon(1e-11));
  CHECK(n.seminorm_sq == doctest::Approx(half + curl).epsilon(1e-11));
  CHECK(n.norm_sq == doctest::Approx(half + curl + l2).epsilon(1e-11));
}

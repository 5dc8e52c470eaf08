// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/oracles.hpp"

#include <cmath>

#include "mheddy/quadrature.hpp"

namespace mheddy::oracle
{

double tet_integral(const std::array<Vec3, 4> &x, const std::function<double(const Vec3 &)> &f,
                    int points)
{
  // Duffy map of the unit cube onto the reference tet, then the affine map onto x.
  const LineRule g = composite_gauss(0.0, 1.0, 1, points);
  Eigen::Matrix3d jac;
  jac.col(0) = x[1] - x[0];
  jac.col(1) = x[2] - x[0];
  jac.col(2) = x[3] - x[0];
  const double det = std::abs(jac.determinant());
  double s = 0.0;
  for (int i = 0; i < points; i++)
  {
    for (int j = 0; j < points; j++)
    {
      for (int k = 0; k < points; k++)
      {
        const double u = g.nodes[i], v = g.nodes[j], w = g.nodes[k];
        const double r1 = u;
        const double r2 = v * (1.0 - u);
        const double r3 = w * (1.0 - u) * (1.0 - v);
        const double jd = (1.0 - u) * (1.0 - u) * (1.0 - v);
        const Vec3 p = x[0] + jac * Vec3(r1, r2, r3);
        s += g.weights[i] * g.weights[j] * g.weights[k] * jd * f(p);
      }
    }
  }
  return s * det;
}

namespace
{

// Barycentric coordinates as affine functions: lambda_i(p) = c_i + g_i . p.
struct Affine
{
  std::array<double, 4> c;
  std::array<Vec3, 4> g;
};

Affine barycentrics(const std::array<Vec3, 4> &x)
{
  Eigen::Matrix4d a;
  for (int i = 0; i < 4; i++)
  {
    a(0, i) = 1.0;
    a.block<3, 1>(1, i) = x[i];
  }
  // Columns of a^{-1}: lambda = a^{-1} (1, p).
  const Eigen::Matrix4d inv = a.inverse();
  Affine af;
  for (int i = 0; i < 4; i++)
  {
    af.c[i] = inv(i, 0);
    af.g[i] = inv.block<1, 3>(i, 1).transpose();
  }
  return af;
}

constexpr int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Vec3 whitney(const Affine &af, int e, const Vec3 &p)
{
  const int i = kEdges[e][0], j = kEdges[e][1];
  const double li = af.c[i] + af.g[i].dot(p);
  const double lj = af.c[j] + af.g[j].dot(p);
  return li * af.g[j] - lj * af.g[i];
}

}  // namespace

Mat6 element_mass(const std::array<Vec3, 4> &x, int points)
{
  const Affine af = barycentrics(x);
  Mat6 m;
  for (int a = 0; a < 6; a++)
  {
    for (int b = 0; b < 6; b++)
    {
      m(a, b) = tet_integral(x, [&](const Vec3 &p) { return whitney(af, a, p).dot(whitney(af, b, p)); },
                             points);
    }
  }
  return m;
}

Mat6 element_curl_curl(const std::array<Vec3, 4> &x, int points)
{
  // Curl by central differences of the (affine) Whitney field, exact up to rounding.
  const Affine af = barycentrics(x);
  auto curl = [&](int e, const Vec3 &p)
  {
    const double h = 1e-3;
    Eigen::Matrix3d d;
    for (int c = 0; c < 3; c++)
    {
      Vec3 dp = Vec3::Zero();
      dp[c] = h;
      d.col(c) = (whitney(af, e, p + dp) - whitney(af, e, p - dp)) / (2.0 * h);
    }
    return Vec3(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  };
  Mat6 m;
  for (int a = 0; a < 6; a++)
  {
    for (int b = 0; b < 6; b++)
    {
      m(a, b) = tet_integral(x, [&](const Vec3 &p) { return curl(a, p).dot(curl(b, p)); }, points);
    }
  }
  return m;
}

Eigen::MatrixXd dense(const SparseSym &a)
{
  return Eigen::MatrixXd(a);
}

Vector dense_solve(const Eigen::MatrixXd &a, const Vector &b)
{
  return a.fullPivLu().solve(b);
}

Eigen::MatrixXd forward_unreformulated(const SystemMatrices &mats, double kw)
{
  const Eigen::MatrixXd k = dense(mats.stiffness);
  const Eigen::MatrixXd ms = dense(mats.weighted_mass);
  const Eigen::Index n = k.rows();
  Eigen::MatrixXd a(2 * n, 2 * n);
  a << k, kw * ms, -kw * ms, k;
  return a;
}

Vector generalized_eigenvalues(const SparseSym &k, const SparseSym &m)
{
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(k), dense(m),
                                                               Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double smallest_nonzero_eigenvalue(const SparseSym &k, const SparseSym &m)
{
  const Vector ev = generalized_eigenvalues(k, m);
  const double cut = 1e-8 * ev.maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); i++)
  {
    if (ev[i] > cut)
    {
      return ev[i];
    }
  }
  return 0.0;
}

double time_integral(const std::function<double(double)> &f, double period, int panels, int points)
{
  const LineRule r = composite_gauss(0.0, period, panels, points);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); i++)
  {
    s += r.weights[i] * f(r.nodes[i]);
  }
  return s;
}

double golden_section_log(const std::function<double(double)> &f, double lo, double hi, double tol)
{
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo), b = std::log(hi);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  while (b - a > tol)
  {
    if (fc < fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(std::exp(c));
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(std::exp(d));
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace mheddy::oracle

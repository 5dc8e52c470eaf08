// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_TESTS_SUPPORT_HPP
#define MHEDDY_TESTS_SUPPORT_HPP

#include <array>
#include <cmath>
#include <random>

#include "mheddy/mesh.hpp"
#include "mheddy/types.hpp"

namespace testing
{

using mheddy::Vec3;
using mheddy::Vector;

inline Vector random_vector(std::mt19937 &rng, Eigen::Index n)
{
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    v[i] = d(rng);
  }
  return v;
}

// Whitney function of a global edge evaluated inside a tet, written from scratch so
// assembly can be checked against it.
struct Whitney
{
  Eigen::Matrix4d inv;  // rows give lambda_i = inv(i,0) + inv(i,1..3) . p

  explicit Whitney(const std::array<Vec3, 4> &x)
  {
    Eigen::Matrix4d a;
    for (int i = 0; i < 4; i++)
    {
      a(0, i) = 1.0;
      a.block<3, 1>(1, i) = x[i];
    }
    inv = a.inverse();
  }

  double lambda(int i, const Vec3 &p) const { return inv(i, 0) + inv.block<1, 3>(i, 1).dot(p); }
  Vec3 grad(int i) const { return inv.block<1, 3>(i, 1).transpose(); }

  // phi_ij = lambda_i grad lambda_j - lambda_j grad lambda_i
  Vec3 phi(int i, int j, const Vec3 &p) const
  {
    return lambda(i, p) * grad(j) - lambda(j, p) * grad(i);
  }
  Vec3 curl(int i, int j) const { return 2.0 * grad(i).cross(grad(j)); }
};

// Field value of an edge vector at a point of tet t, from the mesh data alone.
inline Vec3 edge_field(const mheddy::TetMesh &mesh, const Vector &edges, int t, const Vec3 &p)
{
  const Whitney w(mesh.tet_coords(t));
  const auto &tet = mesh.tets[t];
  Vec3 v = Vec3::Zero();
  for (int l = 0; l < 6; l++)
  {
    int a = mheddy::kLocalEdges[l][0], b = mheddy::kLocalEdges[l][1];
    if (tet[a] > tet[b])
    {
      std::swap(a, b);
    }
    v += edges[mesh.tet_edges[t][l].edge] * w.phi(a, b, p);
  }
  return v;
}

inline Vec3 edge_curl(const mheddy::TetMesh &mesh, const Vector &edges, int t)
{
  const Whitney w(mesh.tet_coords(t));
  const auto &tet = mesh.tets[t];
  Vec3 v = Vec3::Zero();
  for (int l = 0; l < 6; l++)
  {
    int a = mheddy::kLocalEdges[l][0], b = mheddy::kLocalEdges[l][1];
    if (tet[a] > tet[b])
    {
      std::swap(a, b);
    }
    v += edges[mesh.tet_edges[t][l].edge] * w.curl(a, b);
  }
  return v;
}

inline double rel_diff(double a, double b)
{
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testing

#endif  // MHEDDY_TESTS_SUPPORT_HPP

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "mheddy/mesh.hpp"
#include "support.hpp"

using namespace mheddy;

namespace
{

// Edge set straight from the tet list.
std::set<std::pair<int, int>> edge_set(const TetMesh &m)
{
  std::set<std::pair<int, int>> s;
  for (const auto &t : m.tets)
  {
    for (const auto &le : kLocalEdges)
    {
      const int a = t[le[0]], b = t[le[1]];
      s.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return s;
}

// Geometric boundary test for box meshes: both endpoints on one face of the box.
bool on_box_face(const Vec3 &a, const Vec3 &b, const Box &box)
{
  for (int d = 0; d < 3; d++)
  {
    for (double plane : {box.lo[d], box.hi[d]})
    {
      if (std::abs(a[d] - plane) < 1e-12 && std::abs(b[d] - plane) < 1e-12)
      {
        return true;
      }
    }
  }
  return false;
}

bool point_on_box_boundary(const Vec3 &a, const Box &box)
{
  for (int d = 0; d < 3; d++)
  {
    if (std::abs(a[d] - box.lo[d]) < 1e-12 || std::abs(a[d] - box.hi[d]) < 1e-12)
    {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("single cube counts")
{
  const TetMesh m = build_box_mesh(1);
  CHECK(m.num_vertices() == 8);
  CHECK(m.num_tets() == 6);
  CHECK(m.num_edges() == 19);
  CHECK(m.boundary_edges.size() == 18);
  CHECK(edge_set(m).size() == 19);
}

TEST_CASE("two by two by two counts")
{
  const TetMesh m = build_box_mesh(2);
  CHECK(m.num_vertices() == 27);
  CHECK(m.num_tets() == 48);
  CHECK(m.num_edges() == static_cast<int>(edge_set(m).size()));
  // Euler characteristic of a ball: V - E + F - T = 1, F from 4T = 2F - F_boundary.
  int boundary_faces = 2 * 6 * 4;  // two triangles per boundary square
  int faces = (4 * m.num_tets() + boundary_faces) / 2;
  CHECK(m.num_vertices() - m.num_edges() + faces - m.num_tets() == 1);
}

TEST_CASE("refinement multiplies the tet count by eight")
{
  for (int n = 1; n <= 4; n++)
  {
    CHECK(build_box_mesh(2 * n).num_tets() == 8 * build_box_mesh(n).num_tets());
  }
}

TEST_CASE("volumes are positive and sum to the box volume")
{
  const Box box{Vec3(-1.0, 0.5, 2.0), Vec3(2.0, 1.0, 4.5)};
  for (int n : {1, 3})
  {
    const TetMesh m = build_box_mesh(n, box);
    double total = 0.0;
    for (int t = 0; t < m.num_tets(); t++)
    {
      CHECK(m.signed_volume(t) > 0.0);
      total += m.signed_volume(t);
    }
    CHECK(total == doctest::Approx(box.volume()).epsilon(1e-12));
  }
}

TEST_CASE("edge orientation and local signs")
{
  const TetMesh m = build_box_mesh(2);
  for (const auto &e : m.edges)
  {
    CHECK(e[0] < e[1]);
  }
  CHECK(std::is_sorted(m.edges.begin(), m.edges.end()));
  for (int t = 0; t < m.num_tets(); t++)
  {
    for (int l = 0; l < 6; l++)
    {
      const int a = m.tets[t][kLocalEdges[l][0]], b = m.tets[t][kLocalEdges[l][1]];
      const auto &te = m.tet_edges[t][l];
      CHECK(te.sign == (a < b ? 1 : -1));
      const auto &e = m.edges[te.edge];
      CHECK(e[0] == std::min(a, b));
      CHECK(e[1] == std::max(a, b));
    }
  }
}

TEST_CASE("boundary classification matches the box geometry")
{
  const Box box{Vec3(0.0, 0.0, 0.0), Vec3(1.0, 2.0, 0.5)};
  for (int n : {1, 2, 3})
  {
    const TetMesh m = build_box_mesh(n, box);
    for (int e = 0; e < m.num_edges(); e++)
    {
      const Vec3 &a = m.vertices[m.edges[e][0]];
      const Vec3 &b = m.vertices[m.edges[e][1]];
      CHECK(static_cast<bool>(m.edge_on_boundary[e]) == on_box_face(a, b, box));
    }
    for (int v = 0; v < m.num_vertices(); v++)
    {
      CHECK(static_cast<bool>(m.node_on_boundary[v]) == point_on_box_boundary(m.vertices[v], box));
    }
    CHECK(std::is_sorted(m.boundary_edges.begin(), m.boundary_edges.end()));
    CHECK(std::is_sorted(m.boundary_nodes.begin(), m.boundary_nodes.end()));
    // Boundary vertex count of an (n+1)^3 grid.
    CHECK(static_cast<int>(m.boundary_nodes.size()) ==
          (n + 1) * (n + 1) * (n + 1) - (n - 1) * (n - 1) * (n - 1));
  }
}

TEST_CASE("rebuilding from a shuffled tet list gives the same edges and boundary")
{
  const TetMesh m = build_box_mesh(3);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3; trial++)
  {
    auto tets = m.tets;
    std::shuffle(tets.begin(), tets.end(), rng);
    const TetMesh r = make_tet_mesh(m.vertices, tets);
    CHECK(r.edges == m.edges);
    CHECK(r.boundary_edges == m.boundary_edges);
    CHECK(r.boundary_nodes == m.boundary_nodes);
  }
  const TetMesh again = make_tet_mesh(m.vertices, m.tets);
  CHECK(again.edges == m.edges);
  CHECK(again.tets == m.tets);
}

TEST_CASE("invalid meshes are rejected")
{
  CHECK_THROWS_AS(build_box_mesh(0), ConfigError);
  CHECK_THROWS_AS(build_box_mesh(2, Box{Vec3(0, 0, 0), Vec3(1, 0, 1)}), ConfigError);
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  CHECK_NOTHROW(make_tet_mesh(x, {{0, 1, 2, 3}}));
  CHECK_THROWS_AS(make_tet_mesh(x, {{0, 2, 1, 3}}), ConfigError);
  CHECK_THROWS_AS(make_tet_mesh(x, {{0, 1, 2, 4}}), ConfigError);
}

TEST_CASE("gradient incidence on a single tet")
{
  std::vector<Vec3> x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  const TetMesh m = make_tet_mesh(x, {{0, 1, 2, 3}});
  const SparseRect g = gradient_incidence(m);
  REQUIRE(g.rows() == 6);
  REQUIRE(g.cols() == 4);
  Vector psi = Vector::Zero(4);
  psi[1] = 1.0;
  const Vector ge = g * psi;
  // Edge (0,1) is the first edge in lexicographic order.
  CHECK(ge[0] == 1.0);
  CHECK((g * Vector::Ones(4)).norm() == 0.0);
}

TEST_CASE("gradient incidence gives endpoint differences")
{
  const TetMesh m = build_box_mesh(2);
  const SparseRect g = gradient_incidence(m);
  Vector psi(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); v++)
  {
    psi[v] = m.vertices[v].x() + 2.0 * m.vertices[v].y() - m.vertices[v].z();
  }
  const Vector ge = g * psi;
  for (int e = 0; e < m.num_edges(); e++)
  {
    CHECK(ge[e] == doctest::Approx(psi[m.edges[e][1]] - psi[m.edges[e][0]]).epsilon(1e-14));
  }
  const SparseRect gi = gradient_incidence_interior(m);
  CHECK(gi.rows() == m.num_edges() - static_cast<int>(m.boundary_edges.size()));
  CHECK(gi.cols() == static_cast<int>(interior_nodes(m).size()));
  CHECK(gi.cols() == 1);
  const int centre = interior_nodes(m)[0];
  int degree = 0;
  for (const auto &e : m.edges)
  {
    degree += (e[0] == centre || e[1] == centre);
  }
  CHECK(gi.nonZeros() == degree);
}

TEST_CASE("mesh writer lists every entity")
{
  const TetMesh m = build_box_mesh(1);
  std::ostringstream os;
  write_mesh(os, m);
  const std::string s = os.str();
  CHECK(s.find("vertices 8") != std::string::npos);
  CHECK(s.find("tets 6") != std::string::npos);
}

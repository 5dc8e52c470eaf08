// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace mheddy
{

double TetMesh::signed_volume(int t) const
{
  const auto &v = tets[t];
  const Vec3 a = vertices[v[1]] - vertices[v[0]];
  const Vec3 b = vertices[v[2]] - vertices[v[0]];
  const Vec3 c = vertices[v[3]] - vertices[v[0]];
  return a.dot(b.cross(c)) / 6.0;
}

std::array<Vec3, 4> TetMesh::tet_coords(int t) const
{
  const auto &v = tets[t];
  return {vertices[v[0]], vertices[v[1]], vertices[v[2]], vertices[v[3]]};
}

TetMesh make_tet_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets)
{
  TetMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.tets = std::move(tets);
  const int nv = mesh.num_vertices();
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    for (int i : mesh.tets[t])
    {
      if (i < 0 || i >= nv)
      {
        throw ConfigError("make_tet_mesh: vertex index out of range");
      }
    }
    if (!(mesh.signed_volume(t) > 0.0))
    {
      throw ConfigError("make_tet_mesh: tet " + std::to_string(t) +
                        " has nonpositive volume");
    }
  }

  std::vector<std::array<int, 2>> pairs;
  pairs.reserve(6 * mesh.tets.size());
  for (const auto &tet : mesh.tets)
  {
    for (const auto &le : kLocalEdges)
    {
      const int a = tet[le[0]], b = tet[le[1]];
      pairs.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  mesh.edges = pairs;

  auto edge_index = [&](int a, int b)
  {
    const std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
    return static_cast<int>(it - mesh.edges.begin());
  };

  mesh.tet_edges.resize(mesh.tets.size());
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const auto &tet = mesh.tets[t];
    for (int j = 0; j < 6; j++)
    {
      const int a = tet[kLocalEdges[j][0]], b = tet[kLocalEdges[j][1]];
      mesh.tet_edges[t][j] = {edge_index(a, b), a < b ? 1 : -1};
    }
  }

  // A face belonging to exactly one tet lies on the boundary.
  std::map<std::array<int, 3>, int> face_count;
  static constexpr int faces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  for (const auto &tet : mesh.tets)
  {
    for (const auto &f : faces)
    {
      std::array<int, 3> key = {tet[f[0]], tet[f[1]], tet[f[2]]};
      std::sort(key.begin(), key.end());
      face_count[key]++;
    }
  }
  mesh.edge_on_boundary.assign(mesh.edges.size(), 0);
  mesh.node_on_boundary.assign(mesh.vertices.size(), 0);
  for (const auto &[key, count] : face_count)
  {
    if (count != 1)
    {
      continue;
    }
    for (int i = 0; i < 3; i++)
    {
      mesh.node_on_boundary[key[i]] = 1;
      mesh.edge_on_boundary[edge_index(key[i], key[(i + 1) % 3])] = 1;
    }
  }
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    if (mesh.edge_on_boundary[e])
    {
      mesh.boundary_edges.push_back(e);
    }
  }
  for (int v = 0; v < mesh.num_vertices(); v++)
  {
    if (mesh.node_on_boundary[v])
    {
      mesh.boundary_nodes.push_back(v);
    }
  }
  return mesh;
}

TetMesh build_box_mesh(int n, const Box &box)
{
  if (n < 1)
  {
    throw ConfigError("build_box_mesh: need n >= 1");
  }
  const Vec3 ext = box.hi - box.lo;
  if (!(ext.minCoeff() > 0.0))
  {
    throw ConfigError("build_box_mesh: box extents must be positive");
  }
  const int m = n + 1;
  auto id = [m](int i, int j, int k) { return i + m * (j + m * k); };

  std::vector<Vec3> vertices;
  vertices.reserve(m * m * m);
  for (int k = 0; k < m; k++)
  {
    for (int j = 0; j < m; j++)
    {
      for (int i = 0; i < m; i++)
      {
        vertices.push_back(box.lo + Vec3(ext.x() * i / n, ext.y() * j / n, ext.z() * k / n));
      }
    }
  }

  // Each permutation of the axes gives one monotone path from (0,0,0) to (1,1,1).
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(6 * n * n * n);
  for (int k = 0; k < n; k++)
  {
    for (int j = 0; j < n; j++)
    {
      for (int i = 0; i < n; i++)
      {
        for (const auto &p : perms)
        {
          std::array<int, 3> c = {i, j, k};
          std::array<int, 4> tet;
          tet[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; s++)
          {
            c[p[s]]++;
            tet[s + 1] = id(c[0], c[1], c[2]);
          }
          tets.push_back(tet);
        }
      }
    }
  }
  // Odd permutations produce negatively oriented tets.
  TetMesh probe;
  probe.vertices = vertices;
  for (auto &tet : tets)
  {
    probe.tets = {tet};
    if (probe.signed_volume(0) < 0.0)
    {
      std::swap(tet[2], tet[3]);
    }
  }
  return make_tet_mesh(std::move(vertices), std::move(tets));
}

namespace
{

SparseRect incidence(const TetMesh &mesh, bool interior_only)
{
  std::vector<int> node_map(mesh.num_vertices(), -1);
  int ncols = 0;
  for (int v = 0; v < mesh.num_vertices(); v++)
  {
    if (!interior_only || !mesh.node_on_boundary[v])
    {
      node_map[v] = ncols++;
    }
  }
  int nrows = 0;
  std::vector<int> edge_map(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    if (!interior_only || !mesh.edge_on_boundary[e])
    {
      edge_map[e] = nrows++;
    }
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    if (edge_map[e] < 0)
    {
      continue;
    }
    const auto [a, b] = mesh.edges[e];
    if (node_map[a] >= 0)
    {
      trips.emplace_back(edge_map[e], node_map[a], -1.0);
    }
    if (node_map[b] >= 0)
    {
      trips.emplace_back(edge_map[e], node_map[b], 1.0);
    }
  }
  SparseRect g(nrows, ncols);
  g.setFromTriplets(trips.begin(), trips.end());
  return g;
}

}  // namespace

SparseRect gradient_incidence(const TetMesh &mesh)
{
  return incidence(mesh, false);
}

SparseRect gradient_incidence_interior(const TetMesh &mesh)
{
  return incidence(mesh, true);
}

std::vector<int> interior_nodes(const TetMesh &mesh)
{
  std::vector<int> nodes;
  for (int v = 0; v < mesh.num_vertices(); v++)
  {
    if (!mesh.node_on_boundary[v])
    {
      nodes.push_back(v);
    }
  }
  return nodes;
}

void write_mesh(std::ostream &os, const TetMesh &mesh)
{
  os.precision(17);
  os << "vertices " << mesh.num_vertices() << "\n";
  for (int v = 0; v < mesh.num_vertices(); v++)
  {
    const Vec3 &x = mesh.vertices[v];
    os << v << " " << x.x() << " " << x.y() << " " << x.z() << "\n";
  }
  os << "tets " << mesh.num_tets() << "\n";
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const auto &tet = mesh.tets[t];
    os << t << " " << tet[0] << " " << tet[1] << " " << tet[2] << " " << tet[3] << "\n";
  }
  os << "edges " << mesh.num_edges() << "\n";
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    os << e << " " << mesh.edges[e][0] << " " << mesh.edges[e][1] << " "
       << int(mesh.edge_on_boundary[e]) << "\n";
  }
}

}  // namespace mheddy

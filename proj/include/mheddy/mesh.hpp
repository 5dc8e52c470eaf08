// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_MESH_HPP
#define MHEDDY_MESH_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "mheddy/types.hpp"

namespace mheddy
{

struct Box
{
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();

  double volume() const { return (hi - lo).prod(); }
};

// Local edge (i, j) of a tet, in local vertex numbering.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct TetEdge
{
  int edge;
  int sign;  // +1 when the local edge runs from lower to higher global vertex
};

//
// Tetrahedral mesh with global edge enumeration. Edges are stored as (a, b) with a < b and
// are numbered in lexicographic order of that pair. Immutable after construction.
//
struct TetMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<TetEdge, 6>> tet_edges;
  std::vector<int> boundary_edges;  // sorted
  std::vector<int> boundary_nodes;  // sorted
  std::vector<char> edge_on_boundary;
  std::vector<char> node_on_boundary;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double signed_volume(int t) const;
  std::array<Vec3, 4> tet_coords(int t) const;
};

// Builds all derived topology (edges, orientations, boundary) from vertices and tets.
// Tets with negative orientation are rejected.
TetMesh make_tet_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets);

// Kuhn subdivision of an n x n x n grid of subcubes, 6 tets per cube sharing the main
// diagonal.
TetMesh build_box_mesh(int n, const Box &box = Box{});

// Node-to-edge incidence: G[e, b] = +1, G[e, a] = -1 for e = (a, b).
SparseRect gradient_incidence(const TetMesh &mesh);

// Same map restricted to interior nodes (columns) and interior edges (rows); this is
// the gradient of nodal functions vanishing on the boundary expressed in free DOFs.
SparseRect gradient_incidence_interior(const TetMesh &mesh);

// Interior node numbering used by gradient_incidence_interior.
std::vector<int> interior_nodes(const TetMesh &mesh);

void write_mesh(std::ostream &os, const TetMesh &mesh);

}  // namespace mheddy

#endif  // MHEDDY_MESH_HPP

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_EDGE_FEM_HPP
#define MHEDDY_EDGE_FEM_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "mheddy/mesh.hpp"
#include "mheddy/types.hpp"

namespace mheddy
{

//
// Piecewise-constant conductivity and reluctivity together with their declared bounds.
// The bounds enter the stability constants, so they are kept separately from the values.
//
struct Coefficients
{
  std::vector<double> sigma;  // per tet
  std::vector<double> nu;     // per tet
  double sigma_min = 1.0, sigma_max = 1.0;
  double nu_min = 1.0, nu_max = 1.0;

  static Coefficients constant(const TetMesh &mesh, double sigma, double nu);

  // Evaluates the given functions at tet centroids; bounds are taken from the values.
  static Coefficients from_functions(const TetMesh &mesh,
                                     const std::function<double(const Vec3 &)> &sigma,
                                     const std::function<double(const Vec3 &)> &nu);

  void validate(const TetMesh &mesh) const;
};

// Free (unconstrained) edges and the inverse map. Constrained edges map to -1.
struct DofMap
{
  int num_edges = 0;
  std::vector<int> free_edges;
  std::vector<int> edge_to_dof;

  // Tangential trace fixed to zero: boundary edges are eliminated.
  static DofMap interior(const TetMesh &mesh);
  static DofMap unconstrained(const TetMesh &mesh);

  int size() const { return static_cast<int>(free_edges.size()); }

  // Free DOF vector -> vector over all edges, constrained entries zero.
  Vector expand(const Vector &dofs) const;
  Vector restrict(const Vector &edges) const;
};

struct TetGeometry
{
  std::array<Vec3, 4> x;
  std::array<Vec3, 4> grad;  // gradients of the barycentric coordinates
  double volume = 0.0;

  Vec3 point(const Bary &l) const { return l[0] * x[0] + l[1] * x[1] + l[2] * x[2] + l[3] * x[3]; }
};

// Throws when the volume is below 1e-14.
TetGeometry tet_geometry(const std::array<Vec3, 4> &x);

// Whitney functions of the six local edges, oriented from local vertex i to j.
std::array<Vec3, 6> local_basis(const TetGeometry &g, const Bary &l);
std::array<Vec3, 6> local_curls(const TetGeometry &g);

using Mat6 = Eigen::Matrix<double, 6, 6>;

struct ElementMatrices
{
  Mat6 mass;
  Mat6 weighted_mass;
  Mat6 stiffness;
};

// Local matrices in local edge orientation.
ElementMatrices element_matrices(const std::array<Vec3, 4> &x, double sigma, double nu);

// curl_curl is the stiffness matrix with unit reluctivity.
enum class MatrixKind
{
  mass,
  weighted_mass,
  stiffness,
  curl_curl
};

SparseSym assemble(const TetMesh &mesh, const Coefficients &coeff, MatrixKind kind,
                   const DofMap &dofs);

// Mesh plus cached element geometry, used to evaluate finite element functions.
class EdgeSpace
{
public:
  explicit EdgeSpace(const TetMesh &mesh);

  const TetMesh &mesh() const { return *mesh_; }
  const TetGeometry &geometry(int t) const { return geom_[t]; }

  // Globally oriented basis values of the six edges of tet t.
  std::array<Vec3, 6> basis(int t, const Bary &l) const;
  std::array<Vec3, 6> curls(int t) const;

  // Evaluate a field given by coefficients over all edges.
  Vec3 value(const Vector &edges, int t, const Bary &l) const;
  Vec3 curl(const Vector &edges, int t) const;

private:
  const TetMesh *mesh_;
  std::vector<TetGeometry> geom_;
};

// Quadrature point handed to field callbacks.
struct PointContext
{
  int tet;
  Vec3 x;
  Bary bary;
};

using PointField = std::function<Vec3(const PointContext &)>;

PointField analytic(VectorFieldFn f);

// (f, phi_e) on free DOFs by the degree-5 rule.
Vector assemble_load(const TetMesh &mesh, const DofMap &dofs, const VectorFieldFn &f);
Vector assemble_load(const EdgeSpace &space, const DofMap &dofs, const PointField &f);

// (f, curl phi_e) on free DOFs by the degree-5 rule.
Vector assemble_curl_load(const EdgeSpace &space, const DofMap &dofs, const PointField &f);

// Edge DOFs int_e f . t ds over all edges, by Gauss-Legendre along each edge.
Vector interpolate(const TetMesh &mesh, const VectorFieldFn &f, int points = 6);

struct FieldNorms
{
  double l2_sq = 0.0;
  double curl_sq = 0.0;
};

// Discrete field: v^T M v and v^T K v.
FieldNorms field_norms(const SparseSym &mass, const SparseSym &curl_curl, const Vector &v);

// Quadrature of w|value|^2 and w|curl|^2 with the degree-5 rule; weight per tet or null.
FieldNorms field_norms(const EdgeSpace &space, const PointField &value, const PointField &curl,
                       const std::vector<double> *weight = nullptr);

double integrate_sq(const EdgeSpace &space, const PointField &f,
                    const std::vector<double> *weight = nullptr);

// Coordinate text format, one "row col value" line per stored entry.
void write_coo(std::ostream &os, const SparseSym &a);

}  // namespace mheddy

#endif  // MHEDDY_EDGE_FEM_HPP

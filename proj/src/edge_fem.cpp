// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include "mheddy/edge_fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mheddy/quadrature.hpp"

namespace mheddy
{

Coefficients Coefficients::constant(const TetMesh &mesh, double sigma, double nu)
{
  Coefficients c;
  c.sigma.assign(mesh.tets.size(), sigma);
  c.nu.assign(mesh.tets.size(), nu);
  c.sigma_min = c.sigma_max = sigma;
  c.nu_min = c.nu_max = nu;
  c.validate(mesh);
  return c;
}

Coefficients Coefficients::from_functions(const TetMesh &mesh,
                                          const std::function<double(const Vec3 &)> &sigma,
                                          const std::function<double(const Vec3 &)> &nu)
{
  Coefficients c;
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const auto x = mesh.tet_coords(t);
    const Vec3 mid = 0.25 * (x[0] + x[1] + x[2] + x[3]);
    c.sigma.push_back(sigma(mid));
    c.nu.push_back(nu(mid));
  }
  if (!c.sigma.empty())
  {
    c.sigma_min = *std::min_element(c.sigma.begin(), c.sigma.end());
    c.sigma_max = *std::max_element(c.sigma.begin(), c.sigma.end());
    c.nu_min = *std::min_element(c.nu.begin(), c.nu.end());
    c.nu_max = *std::max_element(c.nu.begin(), c.nu.end());
  }
  c.validate(mesh);
  return c;
}

void Coefficients::validate(const TetMesh &mesh) const
{
  if (sigma.size() != mesh.tets.size() || nu.size() != mesh.tets.size())
  {
    throw ConfigError("coefficients: one value per tet required");
  }
  if (!(sigma_min > 0.0 && nu_min > 0.0 && sigma_min <= sigma_max && nu_min <= nu_max))
  {
    throw ConfigError("coefficients: bounds must satisfy 0 < min <= max");
  }
  for (std::size_t t = 0; t < sigma.size(); t++)
  {
    if (sigma[t] < sigma_min || sigma[t] > sigma_max || nu[t] < nu_min || nu[t] > nu_max)
    {
      throw ConfigError("coefficients: value outside declared bounds");
    }
  }
}

DofMap DofMap::interior(const TetMesh &mesh)
{
  DofMap d;
  d.num_edges = mesh.num_edges();
  d.edge_to_dof.assign(d.num_edges, -1);
  for (int e = 0; e < d.num_edges; e++)
  {
    if (!mesh.edge_on_boundary[e])
    {
      d.edge_to_dof[e] = static_cast<int>(d.free_edges.size());
      d.free_edges.push_back(e);
    }
  }
  return d;
}

DofMap DofMap::unconstrained(const TetMesh &mesh)
{
  DofMap d;
  d.num_edges = mesh.num_edges();
  d.edge_to_dof.resize(d.num_edges);
  d.free_edges.resize(d.num_edges);
  for (int e = 0; e < d.num_edges; e++)
  {
    d.edge_to_dof[e] = e;
    d.free_edges[e] = e;
  }
  return d;
}

Vector DofMap::expand(const Vector &dofs) const
{
  if (dofs.size() != size())
  {
    throw std::invalid_argument("DofMap::expand: dimension mismatch");
  }
  Vector full = Vector::Zero(num_edges);
  for (int i = 0; i < size(); i++)
  {
    full[free_edges[i]] = dofs[i];
  }
  return full;
}

Vector DofMap::restrict(const Vector &edges) const
{
  if (edges.size() != num_edges)
  {
    throw std::invalid_argument("DofMap::restrict: dimension mismatch");
  }
  Vector dofs(size());
  for (int i = 0; i < size(); i++)
  {
    dofs[i] = edges[free_edges[i]];
  }
  return dofs;
}

TetGeometry tet_geometry(const std::array<Vec3, 4> &x)
{
  TetGeometry g;
  g.x = x;
  Eigen::Matrix3d jac;
  jac.col(0) = x[1] - x[0];
  jac.col(1) = x[2] - x[0];
  jac.col(2) = x[3] - x[0];
  const double det = jac.determinant();
  g.volume = std::abs(det) / 6.0;
  if (g.volume < 1e-14)
  {
    throw std::invalid_argument("tet_geometry: degenerate tet");
  }
  const Eigen::Matrix3d inv = jac.inverse();
  g.grad[1] = inv.row(0).transpose();
  g.grad[2] = inv.row(1).transpose();
  g.grad[3] = inv.row(2).transpose();
  g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
  return g;
}

std::array<Vec3, 6> local_basis(const TetGeometry &g, const Bary &l)
{
  std::array<Vec3, 6> phi;
  for (int j = 0; j < 6; j++)
  {
    const int a = kLocalEdges[j][0], b = kLocalEdges[j][1];
    phi[j] = l[a] * g.grad[b] - l[b] * g.grad[a];
  }
  return phi;
}

std::array<Vec3, 6> local_curls(const TetGeometry &g)
{
  std::array<Vec3, 6> c;
  for (int j = 0; j < 6; j++)
  {
    const int a = kLocalEdges[j][0], b = kLocalEdges[j][1];
    c[j] = 2.0 * g.grad[a].cross(g.grad[b]);
  }
  return c;
}

ElementMatrices element_matrices(const std::array<Vec3, 4> &x, double sigma, double nu)
{
  const TetGeometry g = tet_geometry(x);
  ElementMatrices em;
  em.mass.setZero();
  const TetRule &rule = tet_rule_degree2();
  for (std::size_t q = 0; q < rule.points.size(); q++)
  {
    const auto phi = local_basis(g, rule.points[q]);
    const double w = rule.weights[q] * g.volume;
    for (int i = 0; i < 6; i++)
    {
      for (int j = 0; j < 6; j++)
      {
        em.mass(i, j) += w * phi[i].dot(phi[j]);
      }
    }
  }
  em.weighted_mass = sigma * em.mass;
  const auto c = local_curls(g);
  for (int i = 0; i < 6; i++)
  {
    for (int j = 0; j < 6; j++)
    {
      em.stiffness(i, j) = nu * g.volume * c[i].dot(c[j]);
    }
  }
  return em;
}

SparseSym assemble(const TetMesh &mesh, const Coefficients &coeff, MatrixKind kind,
                   const DofMap &dofs)
{
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(36 * mesh.tets.size());
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const double sigma = coeff.sigma.empty() ? 1.0 : coeff.sigma[t];
    const double nu = kind == MatrixKind::curl_curl ? 1.0 : coeff.nu[t];
    const ElementMatrices em = element_matrices(mesh.tet_coords(t), sigma, nu);
    const Mat6 &local = kind == MatrixKind::mass            ? em.mass
                        : kind == MatrixKind::weighted_mass ? em.weighted_mass
                                                            : em.stiffness;
    const auto &te = mesh.tet_edges[t];
    for (int i = 0; i < 6; i++)
    {
      const int r = dofs.edge_to_dof[te[i].edge];
      if (r < 0)
      {
        continue;
      }
      for (int j = 0; j < 6; j++)
      {
        const int c = dofs.edge_to_dof[te[j].edge];
        if (c < 0)
        {
          continue;
        }
        trips.emplace_back(r, c, te[i].sign * te[j].sign * local(i, j));
      }
    }
  }
  SparseSym a(dofs.size(), dofs.size());
  a.setFromTriplets(trips.begin(), trips.end());
  a.prune([](Eigen::Index, Eigen::Index, double v) { return v != 0.0; });
  a.makeCompressed();
  return a;
}

EdgeSpace::EdgeSpace(const TetMesh &mesh) : mesh_(&mesh)
{
  geom_.reserve(mesh.tets.size());
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    geom_.push_back(tet_geometry(mesh.tet_coords(t)));
  }
}

std::array<Vec3, 6> EdgeSpace::basis(int t, const Bary &l) const
{
  auto phi = local_basis(geom_[t], l);
  const auto &te = mesh_->tet_edges[t];
  for (int j = 0; j < 6; j++)
  {
    phi[j] *= te[j].sign;
  }
  return phi;
}

std::array<Vec3, 6> EdgeSpace::curls(int t) const
{
  auto c = local_curls(geom_[t]);
  const auto &te = mesh_->tet_edges[t];
  for (int j = 0; j < 6; j++)
  {
    c[j] *= te[j].sign;
  }
  return c;
}

Vec3 EdgeSpace::value(const Vector &edges, int t, const Bary &l) const
{
  const auto phi = basis(t, l);
  const auto &te = mesh_->tet_edges[t];
  Vec3 v = Vec3::Zero();
  for (int j = 0; j < 6; j++)
  {
    v += edges[te[j].edge] * phi[j];
  }
  return v;
}

Vec3 EdgeSpace::curl(const Vector &edges, int t) const
{
  const auto c = curls(t);
  const auto &te = mesh_->tet_edges[t];
  Vec3 v = Vec3::Zero();
  for (int j = 0; j < 6; j++)
  {
    v += edges[te[j].edge] * c[j];
  }
  return v;
}

PointField analytic(VectorFieldFn f)
{
  return [f = std::move(f)](const PointContext &p) { return f(p.x); };
}

Vector assemble_load(const TetMesh &mesh, const DofMap &dofs, const VectorFieldFn &f)
{
  const EdgeSpace space(mesh);
  return assemble_load(space, dofs, analytic(f));
}

Vector assemble_load(const EdgeSpace &space, const DofMap &dofs, const PointField &f)
{
  const TetMesh &mesh = space.mesh();
  const TetRule &rule = tet_rule_degree5();
  Vector b = Vector::Zero(dofs.size());
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const TetGeometry &g = space.geometry(t);
    std::array<double, 6> acc{};
    for (std::size_t q = 0; q < rule.points.size(); q++)
    {
      const Bary &l = rule.points[q];
      const Vec3 fx = f({t, g.point(l), l});
      const auto phi = space.basis(t, l);
      for (int j = 0; j < 6; j++)
      {
        acc[j] += rule.weights[q] * fx.dot(phi[j]);
      }
    }
    const auto &te = mesh.tet_edges[t];
    for (int j = 0; j < 6; j++)
    {
      const int r = dofs.edge_to_dof[te[j].edge];
      if (r >= 0)
      {
        b[r] += g.volume * acc[j];
      }
    }
  }
  return b;
}

Vector assemble_curl_load(const EdgeSpace &space, const DofMap &dofs, const PointField &f)
{
  const TetMesh &mesh = space.mesh();
  const TetRule &rule = tet_rule_degree5();
  Vector b = Vector::Zero(dofs.size());
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const TetGeometry &g = space.geometry(t);
    Vec3 mean = Vec3::Zero();
    for (std::size_t q = 0; q < rule.points.size(); q++)
    {
      const Bary &l = rule.points[q];
      mean += rule.weights[q] * f({t, g.point(l), l});
    }
    const auto c = space.curls(t);
    const auto &te = mesh.tet_edges[t];
    for (int j = 0; j < 6; j++)
    {
      const int r = dofs.edge_to_dof[te[j].edge];
      if (r >= 0)
      {
        b[r] += g.volume * mean.dot(c[j]);
      }
    }
  }
  return b;
}

Vector interpolate(const TetMesh &mesh, const VectorFieldFn &f, int points)
{
  const LineRule rule = gauss_legendre(points);
  Vector v(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const Vec3 &xa = mesh.vertices[mesh.edges[e][0]];
    const Vec3 &xb = mesh.vertices[mesh.edges[e][1]];
    const Vec3 d = xb - xa;
    double s = 0.0;
    for (int i = 0; i < points; i++)
    {
      const double u = 0.5 * (1.0 + rule.nodes[i]);
      s += 0.5 * rule.weights[i] * f(xa + u * d).dot(d);
    }
    v[e] = s;
  }
  return v;
}

FieldNorms field_norms(const SparseSym &mass, const SparseSym &curl_curl, const Vector &v)
{
  return {v.dot(mass * v), v.dot(curl_curl * v)};
}

double integrate_sq(const EdgeSpace &space, const PointField &f, const std::vector<double> *weight)
{
  const TetRule &rule = tet_rule_degree5();
  double total = 0.0;
  for (int t = 0; t < space.mesh().num_tets(); t++)
  {
    const TetGeometry &g = space.geometry(t);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); q++)
    {
      const Bary &l = rule.points[q];
      s += rule.weights[q] * f({t, g.point(l), l}).squaredNorm();
    }
    total += (weight ? (*weight)[t] : 1.0) * g.volume * s;
  }
  return total;
}

FieldNorms field_norms(const EdgeSpace &space, const PointField &value, const PointField &curl,
                       const std::vector<double> *weight)
{
  return {integrate_sq(space, value, weight), integrate_sq(space, curl, weight)};
}

void write_coo(std::ostream &os, const SparseSym &a)
{
  os.precision(17);
  for (int r = 0; r < a.outerSize(); r++)
  {
    for (SparseSym::InnerIterator it(a, r); it; ++it)
    {
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
    }
  }
}

}  // namespace mheddy

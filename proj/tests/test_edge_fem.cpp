// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mheddy/edge_fem.hpp"
#include "mheddy/oracles.hpp"
#include "mheddy/quadrature.hpp"
#include "support.hpp"

using namespace mheddy;
using testing::random_vector;

namespace
{

const std::array<Vec3, 4> kReference = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
                                        Vec3(0, 0, 1)};
const std::array<Vec3, 4> kSkewed = {Vec3(0.1, -0.2, 0.0), Vec3(1.3, 0.1, 0.2),
                                     Vec3(0.4, 0.9, -0.1), Vec3(0.2, 0.3, 1.1)};

double max_abs(const Eigen::MatrixXd &a)
{
  return a.cwiseAbs().maxCoeff();
}

// Edge values of the nodal interpolant of psi on the local edges.
Eigen::Matrix<double, 6, 1> local_gradient(const Eigen::Vector4d &psi)
{
  Eigen::Matrix<double, 6, 1> g;
  for (int l = 0; l < 6; l++)
  {
    g[l] = psi[kLocalEdges[l][1]] - psi[kLocalEdges[l][0]];
  }
  return g;
}

}  // namespace

TEST_CASE("element matrices agree with the cartesian oracle")
{
  for (const auto &x : {kReference, kSkewed})
  {
    const ElementMatrices em = element_matrices(x, 1.0, 1.0);
    const Mat6 m = oracle::element_mass(x);
    const Mat6 k = oracle::element_curl_curl(x);
    CHECK(max_abs(em.mass - m) <= 1e-12 * max_abs(m));
    CHECK(max_abs(em.stiffness - k) <= 1e-9 * max_abs(k));
    CHECK(max_abs(em.mass - em.mass.transpose()) == 0.0);
  }
}

TEST_CASE("element coefficients scale the matrices")
{
  const ElementMatrices a = element_matrices(kSkewed, 1.0, 1.0);
  const ElementMatrices b = element_matrices(kSkewed, 2.5, 0.4);
  CHECK(max_abs(b.weighted_mass - 2.5 * a.mass) <= 1e-15 * max_abs(a.mass));
  CHECK(max_abs(b.stiffness - 0.4 * a.stiffness) <= 1e-15 * max_abs(a.stiffness));
}

TEST_CASE("element matrices scale with the tet size")
{
  std::array<Vec3, 4> big;
  for (int i = 0; i < 4; i++)
  {
    big[i] = 2.0 * kSkewed[i];
  }
  const ElementMatrices a = element_matrices(kSkewed, 1.0, 1.0);
  const ElementMatrices b = element_matrices(big, 1.0, 1.0);
  CHECK(max_abs(b.mass - 2.0 * a.mass) <= 1e-13 * max_abs(a.mass));
  CHECK(max_abs(b.stiffness - 0.5 * a.stiffness) <= 1e-13 * max_abs(a.stiffness));
}

TEST_CASE("element spectra")
{
  const ElementMatrices em = element_matrices(kSkewed, 1.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Mat6> ms(em.mass);
  CHECK(ms.eigenvalues().minCoeff() > 0.0);
  Eigen::SelfAdjointEigenSolver<Mat6> ks(em.stiffness);
  const auto ev = ks.eigenvalues();
  const double top = ev.maxCoeff();
  int zero = 0;
  for (int i = 0; i < 6; i++)
  {
    CHECK(ev[i] >= -1e-12 * top);
    zero += ev[i] < 1e-12 * top;
  }
  CHECK(zero == 3);  // gradients of the four nodal functions modulo constants
}

TEST_CASE("element stiffness annihilates local gradients")
{
  std::mt19937 rng(3);
  const ElementMatrices em = element_matrices(kSkewed, 1.0, 1.0);
  for (int trial = 0; trial < 5; trial++)
  {
    const Eigen::Vector4d psi = random_vector(rng, 4);
    const auto g = local_gradient(psi);
    CHECK((em.stiffness * g).cwiseAbs().maxCoeff() <= 1e-12 * max_abs(em.stiffness));
  }
}

TEST_CASE("degenerate tets are rejected")
{
  const std::array<Vec3, 4> flat = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)};
  CHECK_THROWS(tet_geometry(flat));
  CHECK_THROWS(element_matrices(flat, 1.0, 1.0));
}

TEST_CASE("assembled matrices on the unit cube")
{
  const TetMesh mesh = build_box_mesh(1);
  const Coefficients coeff = Coefficients::constant(mesh, 1.0, 1.0);
  const DofMap dofs = DofMap::unconstrained(mesh);
  const SparseSym m = assemble(mesh, coeff, MatrixKind::mass, dofs);
  const SparseSym k = assemble(mesh, coeff, MatrixKind::stiffness, dofs);
  CHECK(m.rows() == 19);
  const Eigen::MatrixXd md = oracle::dense(m);
  const Eigen::MatrixXd kd = oracle::dense(k);
  CHECK(max_abs(md - md.transpose()) == 0.0);
  CHECK(max_abs(kd - kd.transpose()) == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(md);
  CHECK(ms.eigenvalues().minCoeff() > 0.0);
  // The kernel of the curl on the whole cube is the gradient space: V - 1 = 7.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> gs(kd, md);
  const auto ev = gs.eigenvalues();
  int zero = 0;
  for (int i = 0; i < ev.size(); i++)
  {
    zero += std::abs(ev[i]) < 1e-10 * ev.maxCoeff();
  }
  CHECK(zero == 7);
}

TEST_CASE("curl-curl kills discrete gradients")
{
  for (int n : {2, 3})
  {
    const TetMesh mesh = build_box_mesh(n);
    const Coefficients coeff = Coefficients::from_functions(
        mesh, [](const Vec3 &x) { return 1.0 + x.x(); }, [](const Vec3 &x) { return 2.0 - x.y(); });
    std::mt19937 rng(n);
    for (bool interior : {false, true})
    {
      const DofMap dofs = interior ? DofMap::interior(mesh) : DofMap::unconstrained(mesh);
      const SparseRect g = interior ? gradient_incidence_interior(mesh) : gradient_incidence(mesh);
      const SparseSym k = assemble(mesh, coeff, MatrixKind::stiffness, dofs);
      const Vector psi = random_vector(rng, g.cols());
      const Vector gp = g * psi;
      const Vector kg = k * gp;
      const Vector scale = k.cwiseAbs() * gp.cwiseAbs();
      CHECK(kg.cwiseAbs().maxCoeff() <= 1e-13 * scale.maxCoeff());
    }
  }
}

TEST_CASE("weighted mass with constant sigma")
{
  const TetMesh mesh = build_box_mesh(2);
  const DofMap dofs = DofMap::interior(mesh);
  const SparseSym m = assemble(mesh, Coefficients::constant(mesh, 1.0, 1.0), MatrixKind::mass, dofs);
  const SparseSym ms =
      assemble(mesh, Coefficients::constant(mesh, 2.0, 1.0), MatrixKind::weighted_mass, dofs);
  CHECK(max_abs(oracle::dense(ms) - 2.0 * oracle::dense(m)) <= 1e-15);
  const SparseSym k =
      assemble(mesh, Coefficients::constant(mesh, 1.0, 3.0), MatrixKind::stiffness, dofs);
  const SparseSym kk =
      assemble(mesh, Coefficients::constant(mesh, 1.0, 3.0), MatrixKind::curl_curl, dofs);
  CHECK(max_abs(oracle::dense(k) - 3.0 * oracle::dense(kk)) <= 1e-13);
}

TEST_CASE("coefficient validation")
{
  const TetMesh mesh = build_box_mesh(1);
  Coefficients c = Coefficients::constant(mesh, 1.0, 1.0);
  c.sigma[0] = 2.0;
  CHECK_THROWS_AS(c.validate(mesh), ConfigError);
  CHECK_THROWS_AS(Coefficients::constant(mesh, -1.0, 1.0), ConfigError);
  c = Coefficients::constant(mesh, 1.0, 1.0);
  c.nu.pop_back();
  CHECK_THROWS_AS(c.validate(mesh), ConfigError);
}

TEST_CASE("dof map round trip")
{
  const TetMesh mesh = build_box_mesh(2);
  const DofMap dofs = DofMap::interior(mesh);
  CHECK(dofs.size() == mesh.num_edges() - static_cast<int>(mesh.boundary_edges.size()));
  std::mt19937 rng(1);
  const Vector v = random_vector(rng, dofs.size());
  const Vector full = dofs.expand(v);
  CHECK(full.size() == mesh.num_edges());
  for (int e : mesh.boundary_edges)
  {
    CHECK(full[e] == 0.0);
  }
  CHECK(dofs.restrict(full) == v);
  CHECK_THROWS(dofs.expand(full));
}

TEST_CASE("load vector against an independent quadrature")
{
  const TetMesh mesh = build_box_mesh(2);
  const DofMap dofs = DofMap::unconstrained(mesh);
  const VectorFieldFn f = [](const Vec3 &x)
  { return Vec3(std::sin(x.y()), x.x() * x.z(), std::exp(0.3 * x.x())); };
  const Vector b = assemble_load(mesh, dofs, f);
  Vector ref = Vector::Zero(mesh.num_edges());
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const auto x = mesh.tet_coords(t);
    const testing::Whitney w(x);
    for (int l = 0; l < 6; l++)
    {
      int a = kLocalEdges[l][0], c = kLocalEdges[l][1];
      if (mesh.tets[t][a] > mesh.tets[t][c])
      {
        std::swap(a, c);
      }
      ref[mesh.tet_edges[t][l].edge] +=
          oracle::tet_integral(x, [&](const Vec3 &p) { return f(p).dot(w.phi(a, c, p)); }, 8);
    }
  }
  CHECK((b - ref).cwiseAbs().maxCoeff() <= 1e-6 * ref.cwiseAbs().maxCoeff());
  // Zero data gives a zero load.
  CHECK(assemble_load(mesh, dofs, [](const Vec3 &) { return Vec3::Zero(); }).norm() == 0.0);
}

TEST_CASE("load of a discrete gradient equals the mass matrix times its coefficients")
{
  const TetMesh mesh = build_box_mesh(3);
  const DofMap dofs = DofMap::unconstrained(mesh);
  const EdgeSpace space(mesh);
  const SparseSym m = assemble(mesh, Coefficients::constant(mesh, 1.0, 1.0), MatrixKind::mass, dofs);
  std::mt19937 rng(5);
  const Vector psi = random_vector(rng, mesh.num_vertices());
  const Vector gp = gradient_incidence(mesh) * psi;
  const Vector b = assemble_load(space, dofs, [&](const PointContext &p)
                                 { return space.value(gp, p.tet, p.bary); });
  CHECK((b - m * gp).cwiseAbs().maxCoeff() <= 1e-12 * (m * gp).cwiseAbs().maxCoeff() + 1e-14);
}

TEST_CASE("curl load pairs with the curl-curl matrix")
{
  const TetMesh mesh = build_box_mesh(2);
  const DofMap dofs = DofMap::unconstrained(mesh);
  const EdgeSpace space(mesh);
  const SparseSym k =
      assemble(mesh, Coefficients::constant(mesh, 1.0, 1.0), MatrixKind::curl_curl, dofs);
  std::mt19937 rng(9);
  const Vector v = random_vector(rng, mesh.num_edges());
  const Vector b = assemble_curl_load(space, dofs, [&](const PointContext &p)
                                      { return space.curl(v, p.tet); });
  CHECK((b - k * v).cwiseAbs().maxCoeff() <= 1e-12 * (k * v).cwiseAbs().maxCoeff());
}

TEST_CASE("edge space evaluation matches the scratch whitney functions")
{
  const TetMesh mesh = build_box_mesh(2);
  const EdgeSpace space(mesh);
  std::mt19937 rng(11);
  const Vector v = random_vector(rng, mesh.num_edges());
  const Bary l = {0.1, 0.2, 0.3, 0.4};
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    const Vec3 x = space.geometry(t).point(l);
    CHECK((space.value(v, t, l) - testing::edge_field(mesh, v, t, x)).norm() <= 1e-12);
    CHECK((space.curl(v, t) - testing::edge_curl(mesh, v, t)).norm() <= 1e-12);
  }
}

TEST_CASE("interpolation reproduces constant fields")
{
  const TetMesh mesh = build_box_mesh(2, Box{Vec3(-1, 0, 0), Vec3(1, 1, 2)});
  const EdgeSpace space(mesh);
  const Vec3 c(0.3, -1.2, 2.0);
  const Vector v = interpolate(mesh, [&](const Vec3 &) { return c; });
  const TetRule &rule = tet_rule_degree5();
  for (int t = 0; t < mesh.num_tets(); t++)
  {
    for (const auto &l : rule.points)
    {
      CHECK((space.value(v, t, l) - c).norm() <= 1e-12);
    }
    CHECK(space.curl(v, t).norm() <= 1e-12);
  }
}

TEST_CASE("interpolation of a gradient is the incidence of the nodal values")
{
  const TetMesh mesh = build_box_mesh(3);
  const auto psi = [](const Vec3 &x) { return std::sin(x.x()) * x.y() + x.z() * x.z(); };
  const auto grad = [](const Vec3 &x)
  { return Vec3(std::cos(x.x()) * x.y(), std::sin(x.x()), 2.0 * x.z()); };
  Vector nodal(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); v++)
  {
    nodal[v] = psi(mesh.vertices[v]);
  }
  const Vector a = interpolate(mesh, grad);
  const Vector b = gradient_incidence(mesh) * nodal;
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("discrete norms")
{
  const TetMesh mesh = build_box_mesh(3);
  const DofMap dofs = DofMap::unconstrained(mesh);
  const EdgeSpace space(mesh);
  const Coefficients coeff = Coefficients::constant(mesh, 1.0, 1.0);
  const SparseSym m = assemble(mesh, coeff, MatrixKind::mass, dofs);
  const SparseSym k = assemble(mesh, coeff, MatrixKind::curl_curl, dofs);
  std::mt19937 rng(2);
  const Vector v = random_vector(rng, mesh.num_edges());
  const FieldNorms a = field_norms(m, k, v);
  const FieldNorms b = field_norms(
      space, [&](const PointContext &p) { return space.value(v, p.tet, p.bary); },
      [&](const PointContext &p) { return space.curl(v, p.tet); });
  CHECK(a.l2_sq == doctest::Approx(b.l2_sq).epsilon(1e-12));
  CHECK(a.curl_sq == doctest::Approx(b.curl_sq).epsilon(1e-12));
  const Vector g = gradient_incidence(mesh) * random_vector(rng, mesh.num_vertices());
  CHECK(field_norms(m, k, g).curl_sq <= 1e-20 * field_norms(m, k, g).l2_sq + 1e-24);
}

TEST_CASE("quadrature norms of the sine profile")
{
  // ||sin(pi x) sin(pi y)||^2 on the unit cube is 1/4.
  const TetMesh mesh = build_box_mesh(8);
  const EdgeSpace space(mesh);
  const double pi = std::numbers::pi;
  const double s = integrate_sq(space, [&](const PointContext &p)
                                { return Vec3(0, 0, std::sin(pi * p.x.x()) * std::sin(pi * p.x.y())); });
  CHECK(s == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("coordinate export")
{
  const TetMesh mesh = build_box_mesh(1);
  const SparseSym m = assemble(mesh, Coefficients::constant(mesh, 1.0, 1.0), MatrixKind::mass,
                               DofMap::unconstrained(mesh));
  std::ostringstream os;
  write_coo(os, m);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line))
  {
    lines += !line.empty();
  }
  CHECK(lines == m.nonZeros());
}

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_ORACLES_HPP
#define MHEDDY_ORACLES_HPP

#include <array>
#include <functional>
#include <vector>

#include "mheddy/edge_fem.hpp"
#include "mheddy/harmonics.hpp"
#include "mheddy/systems.hpp"

//
// Reference computations that share no code path with the library routines they check.
// Used by the `verify` command and by the tests.
//
namespace mheddy::oracle
{

// Integral over the tet with vertices x of f, by a collapsed tensor Gauss rule with
// `points` nodes per direction (exact for polynomials of degree 2 * points - 3).
double tet_integral(const std::array<Vec3, 4> &x, const std::function<double(const Vec3 &)> &f,
                    int points = 6);

// Element matrices computed from the Whitney functions written out in Cartesian form.
Mat6 element_mass(const std::array<Vec3, 4> &x, int points = 6);
Mat6 element_curl_curl(const std::array<Vec3, 4> &x, int points = 6);

Eigen::MatrixXd dense(const SparseSym &a);

// Dense LU solve.
Vector dense_solve(const Eigen::MatrixXd &a, const Vector &b);

// Forward mode k >= 1 in the original (non-symmetric) ordering, unknowns (y^c, y^s).
Eigen::MatrixXd forward_unreformulated(const SystemMatrices &mats, double kw);

// Eigenvalues of K x = lambda M x (dense, ascending).
Vector generalized_eigenvalues(const SparseSym &k, const SparseSym &m);

// Smallest eigenvalue of K x = lambda M x above the gradient kernel (relative cut 1e-8).
double smallest_nonzero_eigenvalue(const SparseSym &k, const SparseSym &m);

// int_0^T int_Omega f(t) by composite Gauss in time, with f given at each time as a value.
double time_integral(const std::function<double(double)> &f, double period, int panels = 40,
                     int points = 10);

// Golden-section minimization of a unimodal function on [lo, hi] in log scale.
double golden_section_log(const std::function<double(double)> &f, double lo, double hi,
                          double tol = 1e-14);

}  // namespace mheddy::oracle

#endif  // MHEDDY_ORACLES_HPP

// SPDX-FileCopyrightText: Copyright (c) 2026 The mheddy Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MHEDDY_TYPES_HPP
#define MHEDDY_TYPES_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mheddy
{

using Vec3 = Eigen::Vector3d;
using Vector = Eigen::VectorXd;
using Bary = std::array<double, 4>;

// Compressed-row sparse matrix. Every assembled operator in the library is symmetric.
using SparseSym = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Rectangular incidence (edges x nodes) shares the storage type.
using SparseRect = SparseSym;

using VectorFieldFn = std::function<Vec3(const Vec3 &)>;

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class GaugeError : public SolverError
{
public:
  using SolverError::SolverError;
};

}  // namespace mheddy

#endif  // MHEDDY_TYPES_HPP

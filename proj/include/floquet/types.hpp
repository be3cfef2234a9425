// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_TYPES_HPP
#define FLOQUET_TYPES_HPP

#include <complex>
#include <numbers>
#include <Eigen/Dense>

namespace floquet
{

using cplx = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace floquet

#endif  // FLOQUET_TYPES_HPP

// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace simg {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Point = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Sentinel for "no noise" in SNR fields.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

}  // namespace simg

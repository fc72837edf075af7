#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace coe {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Absolute floor below which |mu_hat + nu| is treated as zero.
inline constexpr double kDegenerateFloor = 1e-14;

} // namespace coe

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mvie {

using Cplx = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;
using CVec6 = Eigen::Matrix<Cplx, 6, 1>;
using CMat6 = Eigen::Matrix<Cplx, 6, 6>;

// Six complex components per voxel (E1,E2,E3,H1,H2,H3), one column per voxel.
using Field = Eigen::Matrix<Cplx, 6, Eigen::Dynamic>;

using CVecX = Eigen::VectorXcd;
using VecX = Eigen::VectorXd;

inline constexpr Cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace mvie

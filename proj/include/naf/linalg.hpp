/// @file linalg.hpp
/// @brief Matrix aliases and small dense helpers.

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace naf {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex I{0.0, 1.0};

/// @brief exp(-i*dt*H) for Hermitian H via eigendecomposition.
/// @throws InternalConsistencyError if H deviates from Hermitian by more than 1e-10
ComplexMatrix hermitian_propagator(const ComplexMatrix& H, double dt);

/// @brief exp(-i*dt*H) for real symmetric H.
ComplexMatrix symmetric_propagator(const RealMatrix& H, double dt);

} // namespace naf

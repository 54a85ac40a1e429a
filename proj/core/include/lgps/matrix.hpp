// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lgps {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Default numeric tolerance for equality checks and convention guards.
inline constexpr double kDefaultTol = 1e-10;

bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);
bool is_unitary(const ComplexMatrix& m, double tol = kDefaultTol);

// Hermitian with all eigenvalues >= -tol.
bool is_positive_semidefinite(const ComplexMatrix& m, double tol = kDefaultTol);

// exp(-i h t) for Hermitian h, via eigendecomposition. Throws ConventionError
// if h is not Hermitian.
ComplexMatrix hermitian_evolution(const ComplexMatrix& h, double t,
                                  double tol = kDefaultTol);

}  // namespace lgps

// Copyright 2026 The chipsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace chipsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Kronecker product. Row index of the result is (i_a * b.rows() + i_b).
CMatrix tensor(const CMatrix &a, const CMatrix &b);

/// Matrix permanent (Ryser formula with Gray-code updates).
/// Throws std::invalid_argument for non-square input or more than 6 rows.
Complex permanent(const CMatrix &a);

/// Hermitian positive-semidefinite square root by spectral decomposition.
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower throws,
/// as does a Hermiticity defect above 1e-10.
CMatrix psd_sqrt(const CMatrix &h);

/// Eigenvalues of a Hermitian matrix in ascending order.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix &h);

/// max |(u^dagger u - I)_ij|
double unitarity_defect(const CMatrix &u);

/// max |(h - h^dagger)_ij|
double hermiticity_defect(const CMatrix &h);

/// Largest entrywise modulus of a - b. Dimensions must agree.
double max_abs_diff(const CMatrix &a, const CMatrix &b);

/// Multiplies by the unit phase that makes the largest-magnitude entry real
/// and positive. The first entry of maximal modulus wins ties.
CMatrix align_global_phase(const CMatrix &m);

/// max-entry distance between a and b after both are phase aligned.
double distance_up_to_phase(const CMatrix &a, const CMatrix &b);

/// Pauli matrices and the 2x2 identity.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix identity(int n);

}  // namespace chipsim

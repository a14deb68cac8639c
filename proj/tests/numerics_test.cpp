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

#include "chipsim/numerics.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"

using namespace chipsim;

namespace {

CMatrix random_matrix(int rows, int cols, std::mt19937_64 &gen) {
    std::normal_distribution<double> n;
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = Complex(n(gen), n(gen));
        }
    }
    return m;
}

// Sum over all permutations.
Complex brute_permanent(const CMatrix &a) {
    std::vector<int> p(static_cast<size_t>(a.rows()));
    std::iota(p.begin(), p.end(), 0);
    Complex total = 0.0;
    do {
        Complex term = 1.0;
        for (int r = 0; r < a.rows(); ++r) {
            term *= a(r, p[static_cast<size_t>(r)]);
        }
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

}  // namespace

TEST(Permanent, known_values) {
    CMatrix ones = CMatrix::Ones(3, 3);
    EXPECT_NEAR(std::abs(permanent(ones) - 6.0), 0.0, 1e-12);
    CMatrix two(2, 2);
    two << 1.0, 2.0, 3.0, 4.0;
    EXPECT_NEAR(std::abs(permanent(two) - 10.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(permanent(CMatrix::Identity(4, 4)) - 1.0), 0.0, 1e-12);
}

TEST(Permanent, matches_permutation_sum) {
    std::mt19937_64 gen(11);
    for (int n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const CMatrix a = random_matrix(n, n, gen);
            EXPECT_LT(std::abs(permanent(a) - brute_permanent(a)), 1e-9 * std::max(1.0, std::abs(brute_permanent(a))))
                << "n=" << n;
        }
    }
}

TEST(Permanent, invariant_under_row_and_column_permutation) {
    std::mt19937_64 gen(12);
    const CMatrix a = random_matrix(5, 5, gen);
    CMatrix b = a;
    b.row(0).swap(b.row(3));
    b.col(1).swap(b.col(4));
    EXPECT_LT(std::abs(permanent(a) - permanent(b)), 1e-10);
    EXPECT_LT(std::abs(permanent(a) - permanent(a.transpose())), 1e-10);
}

TEST(Permanent, rejects_non_square) {
    EXPECT_THROW(permanent(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(Tensor, kron_of_paulis) {
    const CMatrix xz = tensor(pauli_x(), pauli_z());
    EXPECT_EQ(xz.rows(), 4);
    EXPECT_NEAR(std::abs(xz(0, 2) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(xz(1, 3) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(xz(0, 0)), 0.0, 1e-15);
    std::mt19937_64 gen(3);
    const CMatrix a = random_matrix(2, 2, gen);
    const CMatrix b = random_matrix(2, 2, gen);
    const CMatrix c = random_matrix(2, 2, gen);
    const CMatrix d = random_matrix(2, 2, gen);
    EXPECT_LT(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)), 1e-12);
}

TEST(PsdSqrt, squares_back) {
    std::mt19937_64 gen(5);
    const CMatrix g = random_matrix(4, 4, gen);
    const CMatrix h = g * g.adjoint();
    const CMatrix s = psd_sqrt(h);
    EXPECT_LT(max_abs_diff(s * s, h), 1e-10);
    EXPECT_LT(hermiticity_defect(s), 1e-12);
    EXPECT_GE(hermitian_eigenvalues(s).minCoeff(), -1e-12);
}

TEST(PsdSqrt, rejects_indefinite_and_non_hermitian) {
    EXPECT_THROW(psd_sqrt(pauli_z()), std::invalid_argument);
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(psd_sqrt(m), std::invalid_argument);
}

TEST(Defects, unitarity_and_hermiticity) {
    EXPECT_LT(unitarity_defect(pauli_y()), 1e-15);
    EXPECT_GT(unitarity_defect(2.0 * identity(2)), 1.0);
    EXPECT_LT(hermiticity_defect(pauli_y()), 1e-15);
    EXPECT_GT(hermiticity_defect(kI * pauli_x()), 1.0);
}

TEST(GlobalPhase, alignment_removes_phase) {
    std::mt19937_64 gen(8);
    const CMatrix a = random_matrix(3, 3, gen);
    const CMatrix b = std::exp(kI * 1.234) * a;
    EXPECT_LT(max_abs_diff(align_global_phase(a), align_global_phase(b)), 1e-12);
    EXPECT_LT(distance_up_to_phase(a, b), 1e-12);
    EXPECT_GT(distance_up_to_phase(a, a.conjugate()), 1e-3);
}

TEST(Paulis, algebra) {
    EXPECT_LT(max_abs_diff(pauli_x() * pauli_y(), kI * pauli_z()), 1e-15);
    EXPECT_LT(max_abs_diff(pauli_z() * pauli_z(), identity(2)), 1e-15);
}

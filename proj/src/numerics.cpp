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
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace chipsim {

CMatrix tensor(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
        for (Eigen::Index ja = 0; ja < a.cols(); ++ja) {
            out.block(ia * b.rows(), ja * b.cols(), b.rows(), b.cols()) = a(ia, ja) * b;
        }
    }
    return out;
}

Complex permanent(const CMatrix &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("permanent: matrix must be square");
    }
    const int n = static_cast<int>(a.rows());
    if (n > 6) {
        throw std::invalid_argument("permanent: at most 6 rows supported");
    }
    if (n == 0) {
        return {1.0, 0.0};
    }
    // Ryser: perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij,
    // iterating subsets in Gray-code order so each step toggles one column.
    std::vector<Complex> row_sums(static_cast<size_t>(n), Complex{0.0, 0.0});
    Complex total{0.0, 0.0};
    uint32_t gray = 0;
    const uint32_t count = 1u << n;
    for (uint32_t k = 1; k < count; ++k) {
        const uint32_t next = k ^ (k >> 1);
        const uint32_t flipped = next ^ gray;
        const int col = std::countr_zero(flipped);
        const double sign = (next & flipped) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            row_sums[static_cast<size_t>(i)] += sign * a(i, col);
        }
        gray = next;
        Complex prod{1.0, 0.0};
        for (const auto &s : row_sums) {
            prod *= s;
        }
        const int bits = std::popcount(gray);
        total += ((bits % 2) == 0 ? 1.0 : -1.0) * prod;
    }
    return (n % 2 == 0) ? total : -total;
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> checked_eigen(const CMatrix &h, const char *who) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
    }
    if (hermiticity_defect(h) > 1e-10) {
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
    }
    // Eigen reads only the lower triangle; symmetrize first so tiny
    // anti-Hermitian noise is averaged rather than dropped.
    const CMatrix sym = 0.5 * (h + h.adjoint());
    return Eigen::SelfAdjointEigenSolver<CMatrix>(sym);
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const CMatrix &h) {
    return checked_eigen(h, "hermitian_eigenvalues").eigenvalues();
}

CMatrix psd_sqrt(const CMatrix &h) {
    const auto solver = checked_eigen(h, "psd_sqrt");
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -1e-10) {
            throw std::invalid_argument("psd_sqrt: matrix has a negative eigenvalue");
        }
        values(i) = std::sqrt(std::max(values(i), 0.0));
    }
    const CMatrix &vectors = solver.eigenvectors();
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

double unitarity_defect(const CMatrix &u) {
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("unitarity_defect: matrix must be square");
    }
    const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix &h) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("hermiticity_defect: matrix must be square");
    }
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

CMatrix align_global_phase(const CMatrix &m) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    // Row-major scan so the tie-break does not depend on storage order.
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double mag = std::abs(m(r, c));
            if (mag > best_mag * (1.0 + 1e-12) + 1e-15) {
                best_mag = mag;
                best = r * m.cols() + c;
            }
        }
    }
    if (best_mag <= 0.0) {
        return m;
    }
    const Complex pivot = m(best / m.cols(), best % m.cols());
    return m * (std::conj(pivot) / std::abs(pivot));
}

double distance_up_to_phase(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("distance_up_to_phase: dimension mismatch");
    }
    // Align b to a through their overlap; aligning each to its own largest
    // entry is unstable when two entries have nearly equal magnitude.
    const Complex overlap = (b.adjoint() * a).trace();
    if (std::abs(overlap) < 1e-300) {
        return max_abs_diff(align_global_phase(a), align_global_phase(b));
    }
    const CMatrix rotated = b * (overlap / std::abs(overlap));
    return max_abs_diff(a, rotated);
}

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

}  // namespace chipsim

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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chipsim/chip.hpp"
#include "chipsim/noise.hpp"
#include "chipsim/numerics.hpp"
#include "chipsim/rng.hpp"

namespace chipsim {

/// Hermitian, unit-trace, positive-semidefinite operator on one or two qubits.
class DensityMatrix {
  public:
    /// Validates dim in {2, 4}, Hermiticity and trace to 1e-10, and
    /// eigenvalues >= -1e-9. Throws std::invalid_argument otherwise.
    explicit DensityMatrix(CMatrix m);

    static DensityMatrix pure(const CVector &psi);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix &matrix() const { return m_; }
    Complex operator()(int r, int c) const { return m_(r, c); }
    double purity() const;
    double min_eigenvalue() const;

  private:
    CMatrix m_;
};

/// Analysis rotation of one output MZ: the measured basis is u_prep(phi_y, phi_z)|k>.
struct AnalysisAngles {
    double phi_y = 0.0;
    double phi_z = 0.0;
};

struct MeasurementSetting {
    std::string label;
    /// One entry per qubit, qubit A first.
    std::vector<AnalysisAngles> qubits;

    int qubit_count() const { return static_cast<int>(qubits.size()); }
    /// Phase configuration with the analysis stages set for this setting.
    /// A single-qubit setting drives qubit A and leaves qubit B at (0, 0).
    PhaseConfig apply_to(const PhaseConfig &base) const;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

struct MLEResult {
    DensityMatrix rho;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
};

enum class Subsystem { A, B };

/// Outcome projectors in outcome order (k = 2 k_A + k_B for two qubits).
std::vector<CMatrix> projectors_of_setting(const MeasurementSetting &s);

/// The sigma_z, sigma_x, sigma_y bases per qubit: "z", "x", "y" for one qubit
/// and the nine products "zz", "zx", ..., "yy" for two.
std::vector<MeasurementSetting> canonical_settings(int qubits);

/// Parses a label of canonical basis letters ("x", "zy", ...).
MeasurementSetting setting_from_label(const std::string &label);

std::vector<double> outcome_probabilities(const DensityMatrix &rho, const MeasurementSetting &s);

/// Maximum-likelihood reconstruction under Poisson statistics.
///
/// counts[s][k] is the (possibly non-integer, expectation-valued) count of
/// outcome k of settings[s]. The state is parameterized as T^dagger T / Tr(T^dagger T)
/// with T lower triangular and maximized by BFGS on central-difference
/// gradients, so the result is a valid density matrix regardless of the data.
MLEResult mle_reconstruct(std::span<const MeasurementSetting> settings,
                          std::span<const std::vector<double>> counts);

/// Same, from coincidence records aligned with `settings`. Single-qubit
/// settings read qubit A's marginal counts (n00 + n01, n10 + n11).
MLEResult mle_reconstruct(std::span<const MeasurementSetting> settings, std::span<const CountRecord> counts);

std::vector<double> outcome_counts(const CountRecord &r, int qubits);

/// sum_k sqrt(p_k q_k)
double statistical_fidelity(std::span<const double> p, std::span<const double> q);
double statistical_fidelity(const CoincidenceProbs &p, const CoincidenceProbs &q);

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double quantum_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

DensityMatrix partial_trace(const DensityMatrix &rho, Subsystem keep);

/// G G^dagger / Tr(G G^dagger) with G filled by standard complex Gaussians.
DensityMatrix sample_hs_random(int dim, Rng &rng);

BlochVector bloch_of_rho(const DensityMatrix &rho);
/// (I + r.sigma) / 2. Throws if |r| > 1 + 1e-9; lengths within that slack are
/// scaled back onto the sphere.
DensityMatrix rho_of_bloch(const BlochVector &b);

/// Poisson-resampled standard deviation of an estimator: every count is
/// redrawn from Poisson(observed) `trials` times.
double monte_carlo_error(std::span<const CountRecord> counts,
                         const std::function<double(std::span<const CountRecord>)> &estimator, int trials,
                         Rng &rng);
double monte_carlo_error(const CountRecord &counts, const std::function<double(const CountRecord &)> &estimator,
                         int trials, Rng &rng);

/// [[[re, im], ...], ...] row-major.
std::string density_to_json(const DensityMatrix &rho);
DensityMatrix density_from_json(const std::string &text);

}  // namespace chipsim

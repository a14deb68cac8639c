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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chipsim/calibration.hpp"
#include "chipsim/chip.hpp"
#include "chipsim/noise.hpp"
#include "chipsim/tomography.hpp"

namespace chipsim {

/// Shared knobs of every experiment driver.
///
/// Exact mode uses no randomness at all: phase errors and Poisson sampling
/// are skipped and counts are their expectation values. Deterministic
/// imperfections (visibility, accidentals) still apply. Sampled runs derive
/// one child generator per task from `seed`, so results do not depend on `jobs`.
struct RunOptions {
    NoiseModel noise;
    uint64_t seed = 1;
    bool exact = false;
    int jobs = 1;
    /// Poisson resamples behind each Monte-Carlo error bar.
    int mc_trials = 20;
};

/// Simulated measurement of one configuration with input |00>: noisy device,
/// mixed quantum/classical statistics, then counts.
struct Measurement {
    CoincidenceProbs probs;
    /// Expected counts in exact mode, Poisson draws otherwise.
    std::array<double, 4> counts{};

    double total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    std::array<double, 4> frequencies() const;
    CountRecord record(const std::string &setting) const;
};

/// `rng` may be null only when `exact` is set.
Measurement measure(const Chip &chip, const PhaseConfig &c, const RunOptions &opts, Rng *rng);

// --- state preparation --------------------------------------------------

/// Single-qubit amplitudes (alpha, beta) for A and (gamma, delta) for B.
struct PrepAmplitudes {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
    Complex gamma{1.0, 0.0};
    Complex delta{0.0, 0.0};

    void validate() const;
    /// alpha gamma|00> + alpha delta|01> + beta gamma|11> + beta delta|10>
    TwoQubitState output_state() const;
};

/// phi_1..phi_4 realizing the amplitudes, phi_5..phi_8 zero.
PhaseConfig prep_config(const PrepAmplitudes &a);

// --- random configuration benchmark -------------------------------------

struct BenchmarkReport {
    std::vector<double> fidelities;
    double mean = 0.0;
    double std = 0.0;

    double fraction_above(double threshold) const;
};

BenchmarkReport random_config_benchmark(int n, const RunOptions &opts);

// --- tomography suites ----------------------------------------------------

struct SuiteEntry {
    std::string label;
    DensityMatrix target;
    DensityMatrix reconstructed;
    double fidelity = 0.0;
    double error = 0.0;
    std::vector<CountRecord> records;
};

struct SuiteReport {
    std::vector<SuiteEntry> entries;

    double mean_fidelity() const;
    double std_fidelity() const;
    double fraction_above(double threshold) const;
};

/// Phi+, Phi-, Psi+, Psi- from |+-> |0>, |+-> |1> inputs to the CNOT.
std::vector<std::pair<std::string, PhaseConfig>> bell_preparations();
SuiteReport bell_state_suite(const RunOptions &opts);

// --- CHSH -------------------------------------------------------------------

/// Preparation for the tunable state (1 - e^{ia})|00> + (1 + e^{ia})|11>.
PhaseConfig chsh_prep_config(double alpha);
/// The normalized tunable state.
TwoQubitState chsh_state(double alpha);

/// Alice phi_6 in {-pi/4, +pi/4} (A1, A2), Bob phi_8 in {beta, beta + pi/2}
/// (B1, B2), phi_5 = phi_7 = pi/2.
std::array<PhaseConfig, 4> chsh_settings(double alpha, double beta);

struct ChshValue {
    double s = 0.0;
    double std = 0.0;
};

/// S = <A1B1> + <A1B2> + <A2B1> - <A2B2>. `rng` may be null in exact mode.
ChshValue chsh_sum(double alpha, double beta, const RunOptions &opts, Rng *rng);
/// Noise-free S(alpha, beta) from the gate model.
double chsh_sum_ideal(double alpha, double beta);

struct ManifoldGrid {
    std::vector<double> alphas;
    std::vector<double> betas;
    /// s[i][j] = S(alphas[i], betas[j])
    std::vector<std::vector<double>> s;
    std::vector<std::vector<double>> std;
};

/// Grid 0, step, ..., 2 pi on both axes (16 points at step 2 pi / 15).
ManifoldGrid chsh_manifold(double step, const RunOptions &opts);

struct Extremum {
    double alpha = 0.0;
    double beta = 0.0;
    double s = 0.0;
};

/// Grid extremum of the ideal manifold polished by alternating golden-section
/// searches. `maximum` selects max or min.
Extremum refine_chsh_extremum(const ManifoldGrid &exact, bool maximum);

/// 1 - sum (S_i - T_i)^2 / sum (S_i - mean S)^2
double r_squared(std::span<const double> measured, std::span<const double> theory);

// --- mixture ------------------------------------------------------------------

/// Amplitudes whose qubit-A reduced state after the CNOT has Bloch vector `target`.
PrepAmplitudes solve_mixed_prep(const BlochVector &target);
/// Gate-level forward simulation of prep_config(a), traced over qubit B.
DensityMatrix reduced_state_a(const PrepAmplitudes &a);

std::vector<BlochVector> sample_hs_targets(int n, uint64_t seed);
SuiteReport mixed_state_suite(std::span<const BlochVector> targets, const RunOptions &opts);

/// `rx,ry,rz` with header.
std::vector<BlochVector> read_bloch_csv(std::istream &in, const std::string &source);

// --- interference scans --------------------------------------------------------

struct HomPoint {
    double delay_fs = 0.0;
    double expected = 0.0;
    double sampled = 0.0;
};

struct HomScan {
    std::vector<HomPoint> points;
    /// Visibility from a Gaussian-dip fit of the sampled (or exact) counts,
    /// after removing the expected accidental level.
    double visibility = 0.0;
    double plateau = 0.0;
    double minimum = 0.0;
    double width_fs = 0.0;
};

/// Coincidences behind the pi/2 MZ versus delay, with v_max = opts.noise.visibility.
HomScan hom_scan(std::span<const double> delays_fs, const SpectralModel &spec, const RunOptions &opts);

struct FringeScan {
    int heater = 1;
    std::vector<double> volts;
    std::array<std::vector<double>, 2> expected;
    std::array<std::vector<double>, 2> counts;

    std::vector<FringeSample> output(int k) const;
};

/// Single-photon counts at the two output rails of the MZ that contains
/// heater `heater` (1..8) as its voltage is swept. External (even) heaters
/// are read out through the surrounding pair of MZs set to pi/2. `contrast`
/// is the fringe contrast C of A (1 - C cos^2); opts.noise.mean_pairs photons
/// enter per voltage.
FringeScan fringe_scan(int heater, std::span<const double> volts, const HeaterCurve &curve, double contrast,
                       const RunOptions &opts, const Chip &chip = Chip());

}  // namespace chipsim

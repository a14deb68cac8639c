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

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chipsim/chip.hpp"
#include "chipsim/rng.hpp"

namespace chipsim {

/// Device imperfections applied on top of the ideal chip model.
struct NoiseModel {
    /// Std of the Gaussian error on every phase setting (rad).
    double phase_sigma = 0.05;
    /// Two-photon indistinguishability; fraction of events with quantum statistics.
    double visibility = 0.978;
    /// Accidental coincidences as a fraction of true coincidences, spread
    /// uniformly over the four outcomes.
    double accidental_fraction = 0.0;
    /// Expected total coincidences per measurement setting.
    double mean_pairs = 1e4;

    /// No phase error, perfect interference, no accidentals.
    static NoiseModel ideal(double mean_pairs = 1e4);
    void validate() const;
};

struct CountRecord {
    std::string setting;
    std::array<uint64_t, 4> n{};

    uint64_t total() const { return n[0] + n[1] + n[2] + n[3]; }
    bool operator==(const CountRecord &) const = default;
};

/// Gaussian source spectrum after the interference filters.
struct SpectralModel {
    double center_nm = 808.0;
    double fwhm_nm = 3.0;

    void validate() const;
};

PhaseConfig apply_phase_noise(const PhaseConfig &c, double sigma, Rng &rng);

/// v * quantum + (1 - v) * classical, componentwise, success included.
CoincidenceProbs mix_statistics(const CoincidenceProbs &quantum, const CoincidenceProbs &classical, double v);

/// Poisson means used by sample_counts: mean_pairs * (p_k + accidental_fraction / 4).
std::array<double, 4> expected_counts(const CoincidenceProbs &p, const NoiseModel &model);

CountRecord sample_counts(const CoincidenceProbs &p, const NoiseModel &model, Rng &rng,
                          std::string setting = {});

/// Coherence time (fs) entering the dip exp(-tau^2 / (2 sigma_t^2)).
///
/// For a Gaussian intensity spectrum with angular-frequency std sigma_w the
/// two-photon overlap is exp(-sigma_w^2 tau^2), so sigma_t = 1 / (sqrt(2) sigma_w)
/// with sigma_w = 2 pi c fwhm / (lambda^2 2 sqrt(2 ln 2)). 808 nm / 3 nm gives
/// about 192 fs.
double coherence_time_fs(const SpectralModel &spec);

/// Coincidence probability 1/2 (1 - v_max exp(-tau^2 / (2 sigma_t^2))) per delay (fs).
std::vector<double> hom_dip_curve(std::span<const double> delays_fs, const SpectralModel &spec, double v_max);

/// (n_classical - n_quantum) / n_classical
double hom_visibility(double n_classical, double n_quantum);

/// `setting,n00,n01,n10,n11` with header.
void write_count_records(std::ostream &out, std::span<const CountRecord> records);
/// `check_setting` may reject a label by throwing std::invalid_argument; the
/// error is reported against the offending line.
std::vector<CountRecord> read_count_records(std::istream &in, const std::string &source,
                                           const std::function<void(const std::string &)> &check_setting = {});

}  // namespace chipsim

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

#include "chipsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "chipsim/csv.hpp"

namespace chipsim {

NoiseModel NoiseModel::ideal(double mean_pairs) {
    NoiseModel m;
    m.phase_sigma = 0.0;
    m.visibility = 1.0;
    m.accidental_fraction = 0.0;
    m.mean_pairs = mean_pairs;
    return m;
}

void NoiseModel::validate() const {
    if (!(phase_sigma >= 0.0)) {
        throw std::invalid_argument("noise: phase_sigma must be >= 0");
    }
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw std::invalid_argument("noise: visibility must lie in [0, 1]");
    }
    if (!(accidental_fraction >= 0.0)) {
        throw std::invalid_argument("noise: accidental_fraction must be >= 0");
    }
    if (!(mean_pairs >= 0.0) || !std::isfinite(mean_pairs)) {
        throw std::invalid_argument("noise: mean_pairs must be finite and >= 0");
    }
}

void SpectralModel::validate() const {
    if (!(fwhm_nm > 0.0) || !(center_nm > 0.0)) {
        throw std::invalid_argument("spectrum: center and fwhm must be positive");
    }
}

PhaseConfig apply_phase_noise(const PhaseConfig &c, double sigma, Rng &rng) {
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("apply_phase_noise: sigma must be >= 0");
    }
    if (sigma == 0.0) {
        return c;
    }
    std::array<double, PhaseConfig::kCount> v = c.values();
    for (auto &phi : v) {
        phi += rng.normal(0.0, sigma);
    }
    return PhaseConfig(v);
}

CoincidenceProbs mix_statistics(const CoincidenceProbs &quantum, const CoincidenceProbs &classical, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("mix_statistics: v must lie in [0, 1]");
    }
    CoincidenceProbs out;
    for (size_t k = 0; k < 4; ++k) {
        out.p[k] = v * quantum.p[k] + (1.0 - v) * classical.p[k];
    }
    out.success = v * quantum.success + (1.0 - v) * classical.success;
    return out;
}

std::array<double, 4> expected_counts(const CoincidenceProbs &p, const NoiseModel &model) {
    std::array<double, 4> mean{};
    for (size_t k = 0; k < 4; ++k) {
        mean[k] = model.mean_pairs * (p.p[k] + 0.25 * model.accidental_fraction);
    }
    return mean;
}

CountRecord sample_counts(const CoincidenceProbs &p, const NoiseModel &model, Rng &rng, std::string setting) {
    model.validate();
    const auto mean = expected_counts(p, model);
    CountRecord r;
    r.setting = std::move(setting);
    for (size_t k = 0; k < 4; ++k) {
        r.n[k] = rng.poisson(std::max(mean[k], 0.0));
    }
    return r;
}

double coherence_time_fs(const SpectralModel &spec) {
    spec.validate();
    constexpr double c_nm_per_fs = 299.792458;  // speed of light in nm/fs
    const double fwhm_hz_per_fs = c_nm_per_fs * spec.fwhm_nm / (spec.center_nm * spec.center_nm);
    const double sigma_nu = fwhm_hz_per_fs / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double sigma_w = 2.0 * kPi * sigma_nu;
    return 1.0 / (std::sqrt(2.0) * sigma_w);
}

std::vector<double> hom_dip_curve(std::span<const double> delays_fs, const SpectralModel &spec, double v_max) {
    if (!(v_max >= 0.0 && v_max <= 1.0)) {
        throw std::invalid_argument("hom_dip_curve: v_max must lie in [0, 1]");
    }
    const double sigma_t = coherence_time_fs(spec);
    std::vector<double> out;
    out.reserve(delays_fs.size());
    for (double tau : delays_fs) {
        out.push_back(0.5 * (1.0 - v_max * std::exp(-tau * tau / (2.0 * sigma_t * sigma_t))));
    }
    return out;
}

double hom_visibility(double n_classical, double n_quantum) {
    if (!(n_classical > 0.0)) {
        throw std::invalid_argument("hom_visibility: n_classical must be positive");
    }
    return (n_classical - n_quantum) / n_classical;
}

void write_count_records(std::ostream &out, std::span<const CountRecord> records) {
    out << "setting,n00,n01,n10,n11\n";
    for (const auto &r : records) {
        out << r.setting << ',' << r.n[0] << ',' << r.n[1] << ',' << r.n[2] << ',' << r.n[3] << '\n';
    }
}

std::vector<CountRecord> read_count_records(std::istream &in, const std::string &source,
                                           const std::function<void(const std::string &)> &check_setting) {
    CsvReader reader(in, source, {"setting", "n00", "n01", "n10", "n11"});
    std::vector<CountRecord> out;
    std::vector<std::string> f;
    static constexpr const char *names[] = {"n00", "n01", "n10", "n11"};
    while (reader.next(f)) {
        CountRecord r;
        r.setting = f[0];
        if (r.setting.empty()) {
            reader.fail("empty setting label");
        }
        if (check_setting) {
            try {
                check_setting(r.setting);
            } catch (const std::invalid_argument &e) {
                reader.fail(e.what());
            }
        }
        for (size_t k = 0; k < 4; ++k) {
            r.n[k] = reader.to_count(f[k + 1], names[k]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace chipsim

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

#include "chipsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <stdexcept>

#include "chipsim/csv.hpp"
#include "chipsim/least_squares.hpp"
#include "chipsim/parallel.hpp"
#include "chipsim/rng.hpp"

namespace chipsim {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Separates the HS target stream from the per-target measurement streams.
constexpr uint64_t kTargetStream = 0x6a09e667f3bcc909ULL;

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(std::span<const double> v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double fraction_of(std::span<const double> v, double threshold) {
    if (v.empty()) {
        return 0.0;
    }
    const auto n = std::count_if(v.begin(), v.end(), [threshold](double x) { return x > threshold; });
    return static_cast<double>(n) / static_cast<double>(v.size());
}

void require_rng(const RunOptions &opts, const Rng *rng) {
    if (!opts.exact && rng == nullptr) {
        throw std::invalid_argument("sampled run requires a generator");
    }
}

/// Runs a list of settings through measure() and reconstructs the state.
/// Exact runs fit the expectation-valued counts directly.
struct TomographyRun {
    std::vector<CountRecord> records;
    std::vector<std::vector<double>> counts;
};

TomographyRun run_settings(const Chip &chip, const PhaseConfig &prep, std::span<const MeasurementSetting> settings,
                           const RunOptions &opts, Rng *rng) {
    TomographyRun run;
    const int qubits = settings.front().qubit_count();
    for (const auto &s : settings) {
        const Measurement m = measure(chip, s.apply_to(prep), opts, rng);
        run.records.push_back(m.record(s.label));
        if (qubits == 2) {
            run.counts.push_back({m.counts[0], m.counts[1], m.counts[2], m.counts[3]});
        } else {
            run.counts.push_back({m.counts[0] + m.counts[1], m.counts[2] + m.counts[3]});
        }
    }
    return run;
}

}  // namespace

std::array<double, 4> Measurement::frequencies() const {
    const double n = total();
    std::array<double, 4> f{};
    if (n > 0.0) {
        for (size_t k = 0; k < 4; ++k) {
            f[k] = counts[k] / n;
        }
    }
    return f;
}

CountRecord Measurement::record(const std::string &setting) const {
    CountRecord r;
    r.setting = setting;
    for (size_t k = 0; k < 4; ++k) {
        r.n[k] = static_cast<uint64_t>(std::llround(std::max(counts[k], 0.0)));
    }
    return r;
}

Measurement measure(const Chip &chip, const PhaseConfig &c, const RunOptions &opts, Rng *rng) {
    require_rng(opts, rng);
    opts.noise.validate();
    const PhaseConfig actual = opts.exact ? c : apply_phase_noise(c, opts.noise.phase_sigma, *rng);
    const auto [quantum, classical] = chip.quantum_and_classical(actual, 0);
    Measurement m;
    m.probs = mix_statistics(quantum, classical, opts.noise.visibility);
    if (opts.exact) {
        m.counts = expected_counts(m.probs, opts.noise);
    } else {
        const CountRecord r = sample_counts(m.probs, opts.noise, *rng);
        for (size_t k = 0; k < 4; ++k) {
            m.counts[k] = static_cast<double>(r.n[k]);
        }
    }
    return m;
}

// --- state preparation --------------------------------------------------------

void PrepAmplitudes::validate() const {
    const double na = std::norm(alpha) + std::norm(beta);
    const double nb = std::norm(gamma) + std::norm(delta);
    if (std::abs(na - 1.0) > 1e-12 || std::abs(nb - 1.0) > 1e-12) {
        throw std::invalid_argument("PrepAmplitudes: each qubit must be normalized");
    }
}

TwoQubitState PrepAmplitudes::output_state() const {
    TwoQubitState s;
    s.amp = {alpha * gamma, alpha * delta, beta * delta, beta * gamma};
    return s;
}

PhaseConfig prep_config(const PrepAmplitudes &a) {
    a.validate();
    const auto relative = [](Complex first, Complex second) {
        if (std::abs(first) == 0.0 || std::abs(second) == 0.0) {
            return 0.0;
        }
        return std::arg(second) - std::arg(first);
    };
    std::array<double, PhaseConfig::kCount> phi{};
    phi[0] = 2.0 * std::atan2(std::abs(a.beta), std::abs(a.alpha));
    phi[1] = relative(a.alpha, a.beta);
    phi[2] = 2.0 * std::atan2(std::abs(a.delta), std::abs(a.gamma));
    phi[3] = relative(a.gamma, a.delta);
    return PhaseConfig(phi);
}

// --- random configuration benchmark -------------------------------------------

double BenchmarkReport::fraction_above(double threshold) const { return fraction_of(fidelities, threshold); }

BenchmarkReport random_config_benchmark(int n, const RunOptions &opts) {
    if (n < 1) {
        throw std::invalid_argument("random_config_benchmark: n must be at least 1");
    }
    opts.noise.validate();
    const Chip chip;
    BenchmarkReport report;
    report.fidelities.assign(static_cast<size_t>(n), 0.0);
    parallel_for(static_cast<size_t>(n), opts.jobs, [&](size_t k) {
        Rng rng = Rng::child(opts.seed, k);
        std::array<double, PhaseConfig::kCount> phi{};
        for (double &p : phi) {
            p = rng.uniform(0.0, kTwoPi);
        }
        const PhaseConfig c(phi);
        const CoincidenceProbs ideal = chip.coincidence_probs(c, 0, Model::gate);
        const Measurement m = measure(chip, c, opts, &rng);
        const auto f = m.frequencies();
        report.fidelities[k] = std::clamp(statistical_fidelity(f, ideal.p), 0.0, 1.0);
    });
    report.mean = mean_of(report.fidelities);
    report.std = std_of(report.fidelities);
    return report;
}

// --- tomography suites ------------------------------------------------------------

double SuiteReport::mean_fidelity() const {
    std::vector<double> f;
    for (const auto &e : entries) {
        f.push_back(e.fidelity);
    }
    return mean_of(f);
}

double SuiteReport::std_fidelity() const {
    std::vector<double> f;
    for (const auto &e : entries) {
        f.push_back(e.fidelity);
    }
    return std_of(f);
}

double SuiteReport::fraction_above(double threshold) const {
    std::vector<double> f;
    for (const auto &e : entries) {
        f.push_back(e.fidelity);
    }
    return fraction_of(f, threshold);
}

std::vector<std::pair<std::string, PhaseConfig>> bell_preparations() {
    const PhaseConfig plus = PhaseConfig().with(1, kPi / 2.0);
    const PhaseConfig minus = plus.with(2, kPi);
    return {{"phi_plus", plus}, {"phi_minus", minus}, {"psi_plus", plus.with(3, kPi)},
            {"psi_minus", minus.with(3, kPi)}};
}

namespace {

CVector bell_vector(size_t index) {
    const double h = 1.0 / std::sqrt(2.0);
    CVector v = CVector::Zero(4);
    switch (index) {
        case 0: v(0) = h; v(3) = h; break;
        case 1: v(0) = h; v(3) = -h; break;
        case 2: v(1) = h; v(2) = h; break;
        default: v(1) = h; v(2) = -h; break;
    }
    return v;
}

SuiteReport collect(std::vector<std::optional<SuiteEntry>> &slots) {
    SuiteReport report;
    for (auto &s : slots) {
        report.entries.push_back(std::move(*s));
    }
    return report;
}

}  // namespace

SuiteReport bell_state_suite(const RunOptions &opts) {
    opts.noise.validate();
    const Chip chip;
    const auto preps = bell_preparations();
    const auto settings = canonical_settings(2);
    std::vector<std::optional<SuiteEntry>> slots(preps.size());
    parallel_for(preps.size(), opts.jobs, [&](size_t k) {
        Rng rng = Rng::child(opts.seed, k);
        const TomographyRun run = run_settings(chip, preps[k].second, settings, opts, &rng);
        const DensityMatrix target = DensityMatrix::pure(bell_vector(k));
        const MLEResult fit = mle_reconstruct(settings, run.counts);
        double error = 0.0;
        if (!opts.exact) {
            error = monte_carlo_error(
                run.records,
                [&](std::span<const CountRecord> r) {
                    return quantum_fidelity(mle_reconstruct(settings, r).rho, target);
                },
                opts.mc_trials, rng);
        }
        slots[k] = SuiteEntry{preps[k].first, target, fit.rho, quantum_fidelity(fit.rho, target), error,
                              run.records};
    });
    return collect(slots);
}

// --- CHSH -------------------------------------------------------------------------

PhaseConfig chsh_prep_config(double alpha) { return PhaseConfig().with(1, alpha + kPi).with(2, 1.5 * kPi); }

TwoQubitState chsh_state(double alpha) {
    const Complex e = std::exp(kI * alpha);
    TwoQubitState s;
    s.amp = {(1.0 - e) / 2.0, 0.0, 0.0, (1.0 + e) / 2.0};
    return s;
}

std::array<PhaseConfig, 4> chsh_settings(double alpha, double beta) {
    const PhaseConfig base = chsh_prep_config(alpha).with(5, kPi / 2.0).with(7, kPi / 2.0);
    const std::array<double, 2> a{-kPi / 4.0, kPi / 4.0};
    const std::array<double, 2> b{beta, beta + kPi / 2.0};
    return {base.with(6, a[0]).with(8, b[0]), base.with(6, a[0]).with(8, b[1]), base.with(6, a[1]).with(8, b[0]),
            base.with(6, a[1]).with(8, b[1])};
}

namespace {

double correlator(std::span<const double> f) { return f[0] - f[1] - f[2] + f[3]; }

double chsh_from(const std::array<std::array<double, 4>, 4> &freq) {
    return correlator(freq[0]) + correlator(freq[1]) + correlator(freq[2]) - correlator(freq[3]);
}

double chsh_from_records(std::span<const CountRecord> records) {
    std::array<std::array<double, 4>, 4> freq{};
    for (size_t s = 0; s < 4; ++s) {
        const double n = static_cast<double>(records[s].total());
        for (size_t k = 0; k < 4; ++k) {
            freq[s][k] = n > 0.0 ? static_cast<double>(records[s].n[k]) / n : 0.0;
        }
    }
    return chsh_from(freq);
}

}  // namespace

double chsh_sum_ideal(double alpha, double beta) {
    std::array<std::array<double, 4>, 4> freq{};
    const auto settings = chsh_settings(alpha, beta);
    for (size_t s = 0; s < 4; ++s) {
        freq[s] = coincidence_probs(settings[s], 0, Model::gate).p;
    }
    return chsh_from(freq);
}

ChshValue chsh_sum(double alpha, double beta, const RunOptions &opts, Rng *rng) {
    require_rng(opts, rng);
    const Chip chip;
    const auto settings = chsh_settings(alpha, beta);
    std::array<std::array<double, 4>, 4> freq{};
    std::vector<CountRecord> records;
    for (size_t s = 0; s < 4; ++s) {
        const Measurement m = measure(chip, settings[s], opts, rng);
        freq[s] = m.frequencies();
        records.push_back(m.record({}));
    }
    ChshValue v;
    v.s = chsh_from(freq);
    if (!opts.exact) {
        v.std = monte_carlo_error(records, chsh_from_records, opts.mc_trials, *rng);
    }
    return v;
}

ManifoldGrid chsh_manifold(double step, const RunOptions &opts) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("chsh_manifold: step must be positive");
    }
    const auto count = static_cast<size_t>(std::floor(kTwoPi / step + 1e-6)) + 1;
    if (count > 4096) {
        throw std::invalid_argument("chsh_manifold: step too small");
    }
    ManifoldGrid g;
    for (size_t k = 0; k < count; ++k) {
        g.alphas.push_back(static_cast<double>(k) * step);
    }
    g.betas = g.alphas;
    g.s.assign(count, std::vector<double>(count, 0.0));
    g.std.assign(count, std::vector<double>(count, 0.0));
    parallel_for(count * count, opts.jobs, [&](size_t idx) {
        const size_t i = idx / count;
        const size_t j = idx % count;
        Rng rng = Rng::child(opts.seed, idx);
        const ChshValue v = chsh_sum(g.alphas[i], g.betas[j], opts, &rng);
        g.s[i][j] = v.s;
        g.std[i][j] = v.std;
    });
    return g;
}

namespace {

/// Golden-section maximization of f on [lo, hi].
template <typename F>
double golden_max(F &&f, double lo, double hi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

Extremum refine_chsh_extremum(const ManifoldGrid &grid, bool maximum) {
    if (grid.alphas.size() < 2 || grid.betas.size() < 2) {
        throw std::invalid_argument("refine_chsh_extremum: grid too small");
    }
    const double sign = maximum ? 1.0 : -1.0;
    size_t bi = 0;
    size_t bj = 0;
    for (size_t i = 0; i < grid.alphas.size(); ++i) {
        for (size_t j = 0; j < grid.betas.size(); ++j) {
            if (sign * grid.s[i][j] > sign * grid.s[bi][bj]) {
                bi = i;
                bj = j;
            }
        }
    }
    const double da = grid.alphas[1] - grid.alphas[0];
    const double db = grid.betas[1] - grid.betas[0];
    Extremum e{grid.alphas[bi], grid.betas[bj], 0.0};
    for (int round = 0; round < 20; ++round) {
        const double a0 = e.alpha;
        const double b0 = e.beta;
        e.alpha = golden_max([&](double a) { return sign * chsh_sum_ideal(a, e.beta); }, a0 - da, a0 + da);
        e.beta = golden_max([&](double b) { return sign * chsh_sum_ideal(e.alpha, b); }, b0 - db, b0 + db);
        if (std::abs(e.alpha - a0) < 1e-12 && std::abs(e.beta - b0) < 1e-12) {
            break;
        }
    }
    e.s = chsh_sum_ideal(e.alpha, e.beta);
    return e;
}

double r_squared(std::span<const double> measured, std::span<const double> theory) {
    if (measured.size() != theory.size() || measured.size() < 2) {
        throw std::invalid_argument("r_squared: need two equal-length series of at least two values");
    }
    const double m = mean_of(measured);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (size_t k = 0; k < measured.size(); ++k) {
        ss_res += (measured[k] - theory[k]) * (measured[k] - theory[k]);
        ss_tot += (measured[k] - m) * (measured[k] - m);
    }
    if (ss_tot == 0.0) {
        throw std::invalid_argument("r_squared: measured values are all equal");
    }
    return 1.0 - ss_res / ss_tot;
}

// --- mixture -------------------------------------------------------------------------

PrepAmplitudes solve_mixed_prep(const BlochVector &target) {
    const double r = target.norm();
    if (!(r <= 1.0 + 1e-12)) {
        throw std::invalid_argument("solve_mixed_prep: Bloch vector longer than 1");
    }
    const double rz = std::clamp(target.z, -1.0, 1.0);
    const double ma = std::sqrt((1.0 + rz) / 2.0);
    const double mb = std::sqrt(std::max(0.0, (1.0 - rz) / 2.0));
    const double transverse = std::hypot(target.x, target.y);
    const double theta = transverse > 0.0 ? std::atan2(-target.y, target.x) : 0.0;

    PrepAmplitudes a;
    a.alpha = ma;
    a.beta = mb * std::exp(-kI * theta);
    double q = 0.0;
    if (ma * mb > 0.0) {
        q = std::min(1.0, transverse / (2.0 * ma * mb));
    }
    const double t = std::asin(q);
    a.gamma = std::cos(t / 2.0);
    a.delta = std::sin(t / 2.0);
    return a;
}

DensityMatrix reduced_state_a(const PrepAmplitudes &a) {
    const CVector psi = output_state(prep_config(a)).normalized().vector();
    return partial_trace(DensityMatrix::pure(psi), Subsystem::A);
}

std::vector<BlochVector> sample_hs_targets(int n, uint64_t seed) {
    if (n < 0) {
        throw std::invalid_argument("sample_hs_targets: n must be non-negative");
    }
    std::vector<BlochVector> out;
    for (int k = 0; k < n; ++k) {
        Rng rng = Rng::child(seed ^ kTargetStream, static_cast<uint64_t>(k));
        out.push_back(bloch_of_rho(sample_hs_random(2, rng)));
    }
    return out;
}

SuiteReport mixed_state_suite(std::span<const BlochVector> targets, const RunOptions &opts) {
    opts.noise.validate();
    const Chip chip;
    const auto settings = canonical_settings(1);
    std::vector<std::optional<SuiteEntry>> slots(targets.size());
    parallel_for(targets.size(), opts.jobs, [&](size_t k) {
        Rng rng = Rng::child(opts.seed, k);
        const DensityMatrix target = rho_of_bloch(targets[k]);
        const PhaseConfig prep = prep_config(solve_mixed_prep(targets[k]));
        const TomographyRun run = run_settings(chip, prep, settings, opts, &rng);
        const MLEResult fit = mle_reconstruct(settings, run.counts);
        double error = 0.0;
        if (!opts.exact) {
            error = monte_carlo_error(
                run.records,
                [&](std::span<const CountRecord> r) {
                    return quantum_fidelity(mle_reconstruct(settings, r).rho, target);
                },
                opts.mc_trials, rng);
        }
        slots[k] = SuiteEntry{"target_" + std::to_string(k), target, fit.rho, quantum_fidelity(fit.rho, target),
                              error, run.records};
    });
    return collect(slots);
}

std::vector<BlochVector> read_bloch_csv(std::istream &in, const std::string &source) {
    CsvReader reader(in, source, {"rx", "ry", "rz"});
    std::vector<BlochVector> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        BlochVector b{reader.to_double(f[0], "rx"), reader.to_double(f[1], "ry"), reader.to_double(f[2], "rz")};
        if (b.norm() > 1.0 + 1e-12) {
            reader.fail("Bloch vector longer than 1");
        }
        out.push_back(b);
    }
    if (out.empty()) {
        reader.fail("no Bloch vectors");
    }
    return out;
}

// --- interference scans ---------------------------------------------------------------

HomScan hom_scan(std::span<const double> delays_fs, const SpectralModel &spec, const RunOptions &opts) {
    opts.noise.validate();
    if (delays_fs.size() < 5) {
        throw std::invalid_argument("hom_scan: need at least 5 delays");
    }
    const auto curve = hom_dip_curve(delays_fs, spec, opts.noise.visibility);
    const double background = opts.noise.mean_pairs * 0.25 * opts.noise.accidental_fraction;
    Rng rng = Rng::child(opts.seed, 0);

    HomScan scan;
    std::vector<double> signal;
    for (size_t k = 0; k < curve.size(); ++k) {
        HomPoint p;
        p.delay_fs = delays_fs[k];
        p.expected = opts.noise.mean_pairs * curve[k] + background;
        p.sampled = opts.exact ? p.expected : static_cast<double>(rng.poisson(p.expected));
        scan.points.push_back(p);
        signal.push_back(p.sampled - background);
    }

    const auto lowest = std::min_element(signal.begin(), signal.end());
    const double top = *std::max_element(signal.begin(), signal.end());
    if (!(top > 0.0)) {
        throw std::invalid_argument("hom_scan: no coincidences");
    }
    const double w0 = coherence_time_fs(spec);
    const double t0 = delays_fs[static_cast<size_t>(lowest - signal.begin())];
    // Parameters: plateau / top, depth, centre / w0, width / w0.
    const ResidualFn residuals = [&](const Eigen::VectorXd &x) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(signal.size()));
        const double w = x(3) * w0;
        for (size_t k = 0; k < signal.size(); ++k) {
            const double d = delays_fs[k] - x(2) * w0;
            const double model = x(0) * (1.0 - x(1) * std::exp(-d * d / (2.0 * w * w)));
            r(static_cast<Eigen::Index>(k)) = model - signal[k] / top;
        }
        return r;
    };
    Eigen::VectorXd x0(4);
    x0 << 1.0, std::clamp(1.0 - *lowest / top, 0.0, 1.0), t0 / w0, 1.0;
    LeastSquaresOptions lso;
    lso.cost_tolerance = 1e-20;
    lso.step_tolerance = 1e-15;
    const auto fit = levenberg_marquardt(residuals, x0, lso);
    scan.plateau = fit.params(0) * top;
    scan.minimum = scan.plateau * (1.0 - fit.params(1));
    scan.width_fs = std::abs(fit.params(3)) * w0;
    scan.visibility = hom_visibility(scan.plateau, scan.minimum);
    return scan;
}

std::vector<FringeSample> FringeScan::output(int k) const {
    if (k < 0 || k > 1) {
        throw std::invalid_argument("FringeScan: output must be 0 or 1");
    }
    std::vector<FringeSample> out;
    for (size_t i = 0; i < volts.size(); ++i) {
        out.push_back({volts[i], counts[static_cast<size_t>(k)][i]});
    }
    return out;
}

FringeScan fringe_scan(int heater, std::span<const double> volts, const HeaterCurve &curve, double contrast,
                       const RunOptions &opts, const Chip &chip) {
    if (heater < 1 || heater > PhaseConfig::kCount) {
        throw std::invalid_argument("fringe_scan: heater must be 1..8");
    }
    if (!(contrast >= 0.0 && contrast <= 1.0)) {
        throw std::invalid_argument("fringe_scan: contrast must lie in [0, 1]");
    }
    opts.noise.validate();
    const bool qubit_a = heater == 1 || heater == 2 || heater == 5 || heater == 6;
    const auto rails = qubit_a ? DualRailMap::kQubitA : DualRailMap::kQubitB;
    PhaseConfig base;
    if (heater % 2 == 0) {
        // External phase: close an interferometer with the MZs on either side.
        const int prep_mz = qubit_a ? 1 : 3;
        base = base.with(prep_mz, kPi / 2.0).with(prep_mz + 4, kPi / 2.0);
    }
    // Coherent weight c of a fringe with contrast C = 2c / (1 + c).
    const double coherent = contrast / (2.0 - contrast);

    Rng rng = Rng::child(opts.seed, static_cast<uint64_t>(heater));
    FringeScan scan;
    scan.heater = heater;
    for (double v : volts) {
        const CMatrix u = chip.transfer_matrix(base.with(heater, phase_of_voltage(curve, v)));
        std::array<double, 2> p{};
        for (size_t r = 0; r < 2; ++r) {
            p[r] = std::norm(u(rails[r], rails[0]));
        }
        const double flat = 0.5 * (p[0] + p[1]);
        scan.volts.push_back(v);
        for (size_t r = 0; r < 2; ++r) {
            const double mean = opts.noise.mean_pairs * (coherent * p[r] + (1.0 - coherent) * flat);
            scan.expected[r].push_back(mean);
            scan.counts[r].push_back(opts.exact ? mean : static_cast<double>(rng.poisson(mean)));
        }
    }
    return scan;
}

}  // namespace chipsim

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

#include "chipsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "chipsim/csv.hpp"
#include "chipsim/least_squares.hpp"
#include "chipsim/numerics.hpp"

namespace chipsim {

bool HeaterCurve::monotone() const {
    // phi'(V) / V = 2 a2 + 3 a3 V + 4 a4 V^2 must stay positive on (0, 7].
    auto slope = [this](double v) { return 2.0 * a2 + 3.0 * a3 * v + 4.0 * a4 * v * v; };
    if (!(slope(0.0) > 0.0) || !(slope(kMaxHeaterVolts) > 0.0)) {
        return false;
    }
    if (a4 != 0.0) {
        const double vertex = -3.0 * a3 / (8.0 * a4);
        if (vertex > 0.0 && vertex < kMaxHeaterVolts && !(slope(vertex) > 0.0)) {
            return false;
        }
    }
    return true;
}

double phase_of_voltage(const HeaterCurve &h, double v) {
    if (!(v >= 0.0 && v <= kMaxHeaterVolts)) {
        throw std::invalid_argument("phase_of_voltage: voltage must lie in [0, 7] V");
    }
    const double v2 = v * v;
    return h.a0 + v2 * (h.a2 + v * (h.a3 + v * h.a4));
}

double voltage_of_phase(const HeaterCurve &h, double target) {
    if (!h.monotone()) {
        throw std::invalid_argument("voltage_of_phase: heater curve is not monotone on [0, 7] V");
    }
    const double lo_phase = phase_of_voltage(h, 0.0);
    const double hi_phase = phase_of_voltage(h, kMaxHeaterVolts);
    if (!(target >= lo_phase && target <= hi_phase)) {
        throw std::invalid_argument("voltage_of_phase: target phase outside the reachable range");
    }
    if (target == phase_of_voltage(h, 0.0)) {
        return 0.0;
    }
    if (target == phase_of_voltage(h, kMaxHeaterVolts)) {
        return kMaxHeaterVolts;
    }
    double lo = 0.0;
    double hi = kMaxHeaterVolts;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (phase_of_voltage(h, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double fringe_model(double amplitude, double contrast, const HeaterCurve &h, double v) {
    const double c = std::cos(0.5 * phase_of_voltage(h, v));
    return amplitude * (1.0 - contrast * c * c);
}

double fringe_sse(std::span<const FringeSample> samples, double amplitude, double contrast, const HeaterCurve &h) {
    double sse = 0.0;
    for (const auto &s : samples) {
        const double d = fringe_model(amplitude, contrast, h, s.volts) - s.counts;
        sse += d * d;
    }
    return sse;
}

namespace {

// The optimizer works in u = V / 7 so all phase coefficients are O(1).
constexpr double kU2 = kMaxHeaterVolts * kMaxHeaterVolts;
constexpr double kU3 = kU2 * kMaxHeaterVolts;
constexpr double kU4 = kU3 * kMaxHeaterVolts;

HeaterCurve curve_from_scaled(const Eigen::VectorXd &x) {
    return HeaterCurve{x(2), x(3) / kU2, x(4) / kU3, x(5) / kU4};
}

struct Crossing {
    double volts;
    bool rising;
};

// Schmitt-trigger detection of mid-level crossings, robust to counting noise.
// Each confirmed crossing is placed at the last sample pair straddling the mid level.
std::vector<Crossing> mid_crossings(std::span<const FringeSample> sorted) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &s : sorted) {
        lo = std::min(lo, s.counts);
        hi = std::max(hi, s.counts);
    }
    const double mid = 0.5 * (lo + hi);
    const double band = 0.1 * (hi - lo);
    std::vector<Crossing> out;
    int state = 0;
    double last_cross = sorted.front().volts;
    for (size_t k = 0; k < sorted.size(); ++k) {
        const auto &s = sorted[k];
        if (k > 0) {
            const auto &p = sorted[k - 1];
            if ((p.counts - mid) * (s.counts - mid) <= 0.0 && p.counts != s.counts) {
                last_cross = p.volts + (mid - p.counts) / (s.counts - p.counts) * (s.volts - p.volts);
            }
        }
        const int now = s.counts > mid + band ? 1 : (s.counts < mid - band ? -1 : 0);
        if (now != 0) {
            if (state != 0 && now != state) {
                out.push_back({last_cross, now > 0});
            }
            state = now;
        }
    }
    return out;
}

// Starting points that put the phase at pi/2 + m pi on each detected crossing.
// Rising counts mean phi passes pi/2 mod 2 pi, falling counts 3 pi/2 mod 2 pi.
std::vector<Eigen::VectorXd> crossing_starts(std::span<const FringeSample> sorted, const std::vector<Crossing> &crossings,
                                             double amplitude, double contrast) {
    const double level = (1.0 - sorted.front().counts / amplitude) / std::max(contrast, 1e-3);
    const double theta0 = std::acos(std::clamp(2.0 * level - 1.0, -1.0, 1.0));
    const double first = crossings.front().rising ? 0.5 * kPi : 1.5 * kPi;
    const auto n = static_cast<Eigen::Index>(crossings.size());
    std::vector<Eigen::VectorXd> out;
    for (double a0 : {theta0, 2.0 * kPi - theta0}) {
        while (a0 >= first) {
            a0 -= 2.0 * kPi;
        }
        while (a0 < first - 2.0 * kPi) {
            a0 += 2.0 * kPi;
        }
        Eigen::MatrixXd m(n, 3);
        Eigen::VectorXd rhs(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double u = crossings[static_cast<size_t>(j)].volts / kMaxHeaterVolts;
            m(j, 0) = u * u;
            m(j, 1) = u * u * u;
            m(j, 2) = u * u * u * u;
            rhs(j) = first + kPi * static_cast<double>(j) - a0;
        }
        const Eigen::VectorXd coeffs = m.completeOrthogonalDecomposition().solve(rhs);
        Eigen::VectorXd x0(6);
        x0 << amplitude, contrast, a0, coeffs(0), coeffs(1), coeffs(2);
        out.push_back(std::move(x0));
    }
    return out;
}

}  // namespace

FringeFit fit_fringe(std::span<const FringeSample> samples) {
    if (samples.size() < 20) {
        throw FitError("fit_fringe: need at least 20 samples");
    }
    std::vector<FringeSample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) { return a.volts < b.volts; });
    for (const auto &s : sorted) {
        if (!(s.volts >= 0.0 && s.volts <= kMaxHeaterVolts)) {
            throw FitError("fit_fringe: sample voltage outside [0, 7] V");
        }
    }
    const auto crossings = mid_crossings(sorted);
    if (crossings.size() < 2) {
        throw FitError("fit_fringe: samples must span at least one full fringe period");
    }

    double max_counts = 0.0;
    double min_counts = std::numeric_limits<double>::infinity();
    for (const auto &s : sorted) {
        max_counts = std::max(max_counts, s.counts);
        min_counts = std::min(min_counts, s.counts);
    }
    if (!(max_counts > 0.0)) {
        throw FitError("fit_fringe: no counts in samples");
    }

    const auto residuals = [&sorted](const Eigen::VectorXd &x) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(sorted.size()));
        for (size_t k = 0; k < sorted.size(); ++k) {
            const double u = sorted[k].volts / kMaxHeaterVolts;
            const double u2 = u * u;
            const double phi = x(2) + u2 * (x(3) + u * (x(4) + u * x(5)));
            const double c = std::cos(0.5 * phi);
            r(static_cast<Eigen::Index>(k)) = x(0) * (1.0 - x(1) * c * c) - sorted[k].counts;
        }
        return r;
    };

    LeastSquaresResult best;
    best.cost = std::numeric_limits<double>::infinity();
    const auto try_start = [&](const Eigen::VectorXd &x0) {
        auto result = levenberg_marquardt(residuals, x0);
        if (result.converged && result.cost < best.cost) {
            best = std::move(result);
        }
    };
    const double contrast0 = 1.0 - min_counts / max_counts;
    for (const auto &x0 : crossing_starts(sorted, crossings, max_counts, contrast0)) {
        try_start(x0);
    }
    // Blind multi-start when the crossing-seeded fits leave a large residual.
    const double good_sse = 0.05 * 0.05 * max_counts * max_counts * static_cast<double>(sorted.size());
    if (!(2.0 * best.cost < good_sse)) {
        const int half = static_cast<int>(crossings.size());
        for (int half_extra = -1; half_extra <= 2; ++half_extra) {
            const double excursion = kPi * std::max(1, half + half_extra);
            for (int k = 0; k < 8; ++k) {
                Eigen::VectorXd x0(6);
                x0 << max_counts, contrast0, k * kPi / 4.0, excursion, 0.0, 0.0;
                try_start(x0);
            }
        }
    }
    if (!std::isfinite(best.cost)) {
        throw FitError("fit_fringe: optimizer did not converge within the iteration budget");
    }

    FringeFit fit;
    fit.amplitude = best.params(0);
    fit.contrast = std::clamp(best.params(1), 0.0, 1.0);
    HeaterCurve curve = curve_from_scaled(best.params);
    if (curve.a2 < 0.0) {
        curve = HeaterCurve{-curve.a0, -curve.a2, -curve.a3, -curve.a4};
    }
    curve.a0 = std::fmod(curve.a0, 2.0 * kPi);
    if (curve.a0 < 0.0) {
        curve.a0 += 2.0 * kPi;
    }
    fit.curve = curve;
    fit.iterations = best.iterations;
    fit.rms = std::sqrt(fringe_sse(sorted, fit.amplitude, fit.contrast, fit.curve) / static_cast<double>(sorted.size()));
    if (fit.rms > 0.1 * std::abs(fit.amplitude)) {
        throw FitError("fit_fringe: rms residual exceeds 10% of the fitted amplitude");
    }
    if (!fit.curve.monotone()) {
        throw FitError("fit_fringe: fitted heater curve is not monotone on [0, 7] V");
    }
    return fit;
}

std::vector<FringeSample> read_fringe_csv(std::istream &in, const std::string &source) {
    CsvReader reader(in, source, {"voltage", "counts"});
    std::vector<FringeSample> out;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const double v = reader.to_double(f[0], "voltage");
        const double c = reader.to_double(f[1], "counts");
        if (v < 0.0 || v > kMaxHeaterVolts) {
            reader.fail("voltage outside [0, 7] V");
        }
        if (c < 0.0) {
            reader.fail("negative counts");
        }
        out.push_back({v, c});
    }
    return out;
}

void write_fringe_csv(std::ostream &out, std::span<const FringeSample> samples) {
    out << "voltage,counts\n";
    out.precision(17);
    for (const auto &s : samples) {
        out << s.volts << ',' << s.counts << '\n';
    }
}

std::string fringe_fit_to_json(const FringeFit &fit) {
    const nlohmann::json j = {{"A", fit.amplitude}, {"C", fit.contrast},   {"a0", fit.curve.a0},
                              {"a2", fit.curve.a2}, {"a3", fit.curve.a3}, {"a4", fit.curve.a4},
                              {"rms", fit.rms}};
    return j.dump();
}

}  // namespace chipsim

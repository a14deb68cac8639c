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

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chipsim {

inline constexpr double kMaxHeaterVolts = 7.0;

/// Thermo-optic phase response phi(V) = a0 + a2 V^2 + a3 V^3 + a4 V^4.
struct HeaterCurve {
    double a0 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;

    /// True when phi is strictly increasing on (0, 7] V. Only meaningful for a2 > 0.
    bool monotone() const;
};

struct FringeSample {
    double volts = 0.0;
    double counts = 0.0;
};

struct FringeFit {
    double amplitude = 0.0;
    double contrast = 0.0;
    HeaterCurve curve;
    double rms = 0.0;
    int iterations = 0;
};

class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unwrapped phase at voltage v in [0, 7].
double phase_of_voltage(const HeaterCurve &h, double v);

/// Inverse of phase_of_voltage by bisection (1e-12 V bracket). Throws
/// std::invalid_argument for unreachable targets or non-monotone curves.
double voltage_of_phase(const HeaterCurve &h, double target);

/// A (1 - C cos^2(phi(V) / 2))
double fringe_model(double amplitude, double contrast, const HeaterCurve &h, double v);

/// Six-parameter nonlinear least-squares fit of fringe_model.
///
/// Needs at least 20 samples covering one fringe period. Starts from
/// A = max counts, C = 1 - min/max, a3 = a4 = 0, with a0 on a grid over
/// [0, 2pi) and a2 seeded from the number of half-fringes in the data;
/// the best start wins. The returned curve is normalized so that a2 > 0 and
/// a0 is in [0, 2pi), which removes the phi -> -phi and phi -> phi + 2pi
/// symmetries of cos^2. Throws FitError if the optimizer does not converge,
/// the rms residual exceeds 10% of A, or the fitted curve is not monotone.
FringeFit fit_fringe(std::span<const FringeSample> samples);

/// Sum of squared residuals of a parameter set against the samples.
double fringe_sse(std::span<const FringeSample> samples, double amplitude, double contrast, const HeaterCurve &h);

/// `voltage,counts` with header.
std::vector<FringeSample> read_fringe_csv(std::istream &in, const std::string &source);
void write_fringe_csv(std::ostream &out, std::span<const FringeSample> samples);

/// {"A":..,"C":..,"a0":..,"a2":..,"a3":..,"a4":..,"rms":..}
std::string fringe_fit_to_json(const FringeFit &fit);

}  // namespace chipsim

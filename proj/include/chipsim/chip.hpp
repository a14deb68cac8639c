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
#include <string>

#include "chipsim/numerics.hpp"
#include "chipsim/optics.hpp"

namespace chipsim {

/// The eight control phases phi_1..phi_8, wrapped into [0, 2pi).
///
/// Odd phases are the MZ-internal (sigma_y) angles and even phases the
/// external (sigma_z) angles of each stage: U_i(phi_1, phi_2) and U_i(phi_3, phi_4)
/// prepare qubits A and B, U_f(phi_5, phi_6) and U_f(phi_7, phi_8) analyse them.
class PhaseConfig {
  public:
    static constexpr int kCount = 8;

    PhaseConfig() = default;
    explicit PhaseConfig(const std::array<double, kCount> &phases);

    /// 1-based access matching phi_1..phi_8.
    double phi(int k) const;
    /// Copy with phi_k replaced (and wrapped).
    PhaseConfig with(int k, double value) const;
    const std::array<double, kCount> &values() const { return phases_; }

    bool operator==(const PhaseConfig &) const = default;

  private:
    std::array<double, kCount> phases_{};
};

double wrap_phase(double phi);

/// Waveguide roles; the first mode of each pair carries logical |0>.
struct DualRailMap {
    static constexpr int kModes = 6;
    static constexpr std::array<int, 2> kQubitA{1, 2};
    static constexpr std::array<int, 2> kQubitB{3, 4};
    static constexpr std::array<int, 2> kAncillas{0, 5};
};

/// Amplitudes over |00>, |01>, |10>, |11> (qubit A is the left factor).
struct TwoQubitState {
    std::array<Complex, 4> amp{};

    static TwoQubitState from_vector(const CVector &v);
    CVector vector() const;
    double norm() const;
    TwoQubitState normalized() const;
};

/// Coincidence probabilities p00, p01, p10, p11 conditioned on one photon per
/// qubit, plus the probability of that postselection.
struct CoincidenceProbs {
    std::array<double, 4> p{};
    double success = 1.0;

    double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

enum class Model { gate, waveguide };

CMatrix h_prime();
/// exp(-i phi_z sigma_z / 2) exp(-i phi_y sigma_y / 2)
CMatrix u_prep(double phi_y, double phi_z);
/// u_prep(phi_y, phi_z)^dagger
CMatrix u_meas(double phi_y, double phi_z);
CMatrix u_cnot();
CMatrix two_qubit_unitary(const PhaseConfig &c);

/// Fig. 1b style six-mode layout with heater-tagged phase elements set from `c`.
Netlist default_netlist(const PhaseConfig &c = {});

/// Copy of `layout` whose heater-tagged phase elements take their values from `c`.
Netlist bind(const Netlist &layout, const PhaseConfig &c);

struct CnotVerification {
    /// Max-entry deviation of 3x the postselected amplitudes from U_CNOT,
    /// after removing one global phase.
    double defect = 0.0;
    /// Postselection probability per computational input 00, 01, 10, 11.
    std::array<double, 4> success{};
};

/// Checks a layout at the all-zero setting, where the device should act as a
/// bare CNOT.
CnotVerification check_cnot(const Netlist &layout);
double verify_cnot();

/// Two-photon Fock input for computational basis state `basis` (0..3).
FockState basis_input(int basis);
/// The four accepted outputs, ordered 00, 01, 10, 11.
const std::vector<FockState> &coincidence_patterns();

/// A device layout plus its simulation entry points. The default layout is
/// default_netlist(); other layouts may be loaded from JSON.
class Chip {
  public:
    Chip();
    explicit Chip(Netlist layout);

    const Netlist &layout() const { return layout_; }
    Netlist configured(const PhaseConfig &c) const { return bind(layout_, c); }
    CMatrix transfer_matrix(const PhaseConfig &c) const;

    CoincidenceProbs coincidence_probs(const PhaseConfig &c, int basis, Model model) const;
    /// Postselected statistics for fully distinguishable photons.
    CoincidenceProbs classical_probs(const PhaseConfig &c, int basis) const;
    /// Both probabilities from one transfer matrix evaluation.
    std::pair<CoincidenceProbs, CoincidenceProbs> quantum_and_classical(const PhaseConfig &c, int basis) const;

  private:
    Netlist layout_;
};

CoincidenceProbs coincidence_probs(const PhaseConfig &c, int basis, Model model);

/// Gate-level output state U(c)|basis>.
TwoQubitState output_state(const PhaseConfig &c, int basis = 0);

std::string phase_config_to_json(const PhaseConfig &c);
PhaseConfig phase_config_from_json(const std::string &text);

}  // namespace chipsim

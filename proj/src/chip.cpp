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

#include "chipsim/chip.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace chipsim {

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * kPi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) {
        w += two_pi;
    }
    // fmod can return exactly two_pi after the shift for tiny negatives.
    if (w >= two_pi) {
        w = 0.0;
    }
    return w;
}

PhaseConfig::PhaseConfig(const std::array<double, kCount> &phases) {
    for (int k = 0; k < kCount; ++k) {
        phases_[static_cast<size_t>(k)] = wrap_phase(phases[static_cast<size_t>(k)]);
    }
}

double PhaseConfig::phi(int k) const {
    if (k < 1 || k > kCount) {
        throw std::out_of_range("PhaseConfig: phase index must be in 1..8");
    }
    return phases_[static_cast<size_t>(k - 1)];
}

PhaseConfig PhaseConfig::with(int k, double value) const {
    if (k < 1 || k > kCount) {
        throw std::out_of_range("PhaseConfig: phase index must be in 1..8");
    }
    PhaseConfig out = *this;
    out.phases_[static_cast<size_t>(k - 1)] = wrap_phase(value);
    return out;
}

TwoQubitState TwoQubitState::from_vector(const CVector &v) {
    if (v.size() != 4) {
        throw std::invalid_argument("TwoQubitState: expected 4 amplitudes");
    }
    TwoQubitState s;
    for (int k = 0; k < 4; ++k) {
        s.amp[static_cast<size_t>(k)] = v(k);
    }
    return s;
}

CVector TwoQubitState::vector() const {
    CVector v(4);
    for (int k = 0; k < 4; ++k) {
        v(k) = amp[static_cast<size_t>(k)];
    }
    return v;
}

double TwoQubitState::norm() const { return vector().norm(); }

TwoQubitState TwoQubitState::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw std::invalid_argument("TwoQubitState: cannot normalize the zero vector");
    }
    return from_vector(vector() / n);
}

CMatrix h_prime() {
    // e^{i pi/2} e^{-i pi sz/4} H e^{-i pi sz/4}
    CMatrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    CMatrix rz = CMatrix::Zero(2, 2);
    rz(0, 0) = std::polar(1.0, -kPi / 4);
    rz(1, 1) = std::polar(1.0, kPi / 4);
    return kI * (rz * h * rz);
}

CMatrix u_prep(double phi_y, double phi_z) {
    CMatrix ry(2, 2);
    const double c = std::cos(phi_y / 2);
    const double s = std::sin(phi_y / 2);
    ry << c, -s, s, c;
    CMatrix rz = CMatrix::Zero(2, 2);
    rz(0, 0) = std::polar(1.0, -phi_z / 2);
    rz(1, 1) = std::polar(1.0, phi_z / 2);
    return rz * ry;
}

CMatrix u_meas(double phi_y, double phi_z) { return u_prep(phi_y, phi_z).adjoint(); }

CMatrix u_cnot() {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(3, 2) = 1;
    m(2, 3) = 1;
    return m;
}

CMatrix two_qubit_unitary(const PhaseConfig &c) {
    const CMatrix prep = tensor(u_prep(c.phi(1), c.phi(2)), u_prep(c.phi(3), c.phi(4)));
    const CMatrix meas = tensor(u_meas(c.phi(5), c.phi(6)), u_meas(c.phi(7), c.phi(8)));
    return meas * u_cnot() * prep;
}

Netlist default_netlist(const PhaseConfig &c) {
    constexpr double half = 0.5;
    // The core couplers have bar (through) power 1/3, i.e. cross power 2/3.
    constexpr double core = 2.0 / 3.0;
    constexpr double quarter_back = 1.5 * kPi;
    const auto [a0, a1] = DualRailMap::kQubitA;
    const auto [b0, b1] = DualRailMap::kQubitB;
    const auto [anc_lo, anc_hi] = DualRailMap::kAncillas;

    Netlist n;
    n.modes = DualRailMap::kModes;
    auto &e = n.elements;

    // Qubit A preparation: Z R_y Z-corrected MZ, then R_z on the lower rail.
    e.emplace_back(Coupler{a0, a1, half});
    e.emplace_back(Phase{a0, 0.0, 1});
    e.emplace_back(Phase{a0, kPi, 0});
    e.emplace_back(Coupler{a0, a1, half});
    e.emplace_back(Phase{a1, kPi, 0});
    e.emplace_back(Phase{a1, 0.0, 2});

    // Qubit B preparation. The bare MZ carries an extra rail swap which the
    // CNOT core needs.
    e.emplace_back(Coupler{b0, b1, half});
    e.emplace_back(Phase{b0, 0.0, 3});
    e.emplace_back(Coupler{b0, b1, half});
    e.emplace_back(Phase{b0, 0.0, 4});

    // CNOT core: H' on the target, three 1/3 couplers, H' again.
    e.emplace_back(Phase{b0, quarter_back, 0});
    e.emplace_back(Coupler{b0, b1, half});
    e.emplace_back(Coupler{anc_lo, a0, core});
    e.emplace_back(Coupler{a1, b0, core});
    e.emplace_back(Coupler{b1, anc_hi, core});
    e.emplace_back(Coupler{b0, b1, half});
    e.emplace_back(Phase{b0, quarter_back, 0});

    // Measurement stages, the mirror image of preparation: U_f = U_i^dagger.
    e.emplace_back(Phase{a0, 0.0, 6});
    e.emplace_back(Phase{a1, kPi, 0});
    e.emplace_back(Coupler{a0, a1, half});
    e.emplace_back(Phase{a0, 0.0, 5});
    e.emplace_back(Phase{a0, kPi, 0});
    e.emplace_back(Coupler{a0, a1, half});

    e.emplace_back(Phase{b0, 0.0, 8});
    e.emplace_back(Phase{b1, kPi, 0});
    e.emplace_back(Coupler{b0, b1, half});
    e.emplace_back(Phase{b0, 0.0, 7});
    e.emplace_back(Phase{b0, kPi, 0});
    e.emplace_back(Coupler{b0, b1, half});

    return bind(n, c);
}

Netlist bind(const Netlist &layout, const PhaseConfig &c) {
    Netlist out = layout;
    for (auto &e : out.elements) {
        if (auto *p = std::get_if<Phase>(&e); p && p->heater != 0) {
            p->phi = c.phi(p->heater);
        }
    }
    return out;
}

FockState basis_input(int basis) {
    if (basis < 0 || basis > 3) {
        throw std::invalid_argument("basis state index must be in 0..3");
    }
    const int a = basis >> 1;
    const int b = basis & 1;
    return FockState::from_modes(DualRailMap::kModes,
                                 {DualRailMap::kQubitA[static_cast<size_t>(a)],
                                  DualRailMap::kQubitB[static_cast<size_t>(b)]});
}

const std::vector<FockState> &coincidence_patterns() {
    static const std::vector<FockState> patterns = [] {
        std::vector<FockState> out;
        for (int k = 0; k < 4; ++k) {
            out.push_back(basis_input(k));
        }
        return out;
    }();
    return patterns;
}

CnotVerification check_cnot(const Netlist &layout) {
    const CMatrix u = compose(bind(layout, PhaseConfig{}));
    if (u.rows() != DualRailMap::kModes) {
        throw std::invalid_argument("check_cnot: layout must have 6 modes");
    }
    const auto &outs = coincidence_patterns();
    CnotVerification v;
    CMatrix gate(4, 4);
    for (int in = 0; in < 4; ++in) {
        const FockState input = basis_input(in);
        double success = 0.0;
        for (int out = 0; out < 4; ++out) {
            const Complex a = two_photon_amplitude(u, input, outs[static_cast<size_t>(out)]);
            gate(out, in) = 3.0 * a;
            success += std::norm(a);
        }
        v.success[static_cast<size_t>(in)] = success;
    }
    v.defect = max_abs_diff(align_global_phase(gate), u_cnot());
    return v;
}

double verify_cnot() { return check_cnot(default_netlist()).defect; }

Chip::Chip() : layout_(default_netlist()) {}

Chip::Chip(Netlist layout) : layout_(std::move(layout)) {
    layout_.validate();
    if (layout_.modes != DualRailMap::kModes) {
        throw std::invalid_argument("Chip: layout must have 6 modes");
    }
}

CMatrix Chip::transfer_matrix(const PhaseConfig &c) const { return compose(configured(c)); }

namespace {

CoincidenceProbs from_postselection(const PhotonDistribution &d) {
    const auto r = postselect(d, coincidence_patterns());
    CoincidenceProbs out;
    out.success = r.success;
    if (!r.empty()) {
        for (size_t k = 0; k < 4; ++k) {
            out.p[k] = r.conditional.probs[k];
        }
    }
    return out;
}

}  // namespace

CoincidenceProbs Chip::coincidence_probs(const PhaseConfig &c, int basis, Model model) const {
    if (model == Model::gate) {
        const CMatrix u = two_qubit_unitary(c);
        if (basis < 0 || basis > 3) {
            throw std::invalid_argument("basis state index must be in 0..3");
        }
        CoincidenceProbs out;
        for (int k = 0; k < 4; ++k) {
            out.p[static_cast<size_t>(k)] = std::norm(u(k, basis));
        }
        out.success = 1.0;
        return out;
    }
    return from_postselection(two_photon_distribution(transfer_matrix(c), basis_input(basis)));
}

CoincidenceProbs Chip::classical_probs(const PhaseConfig &c, int basis) const {
    return from_postselection(distinguishable_distribution(transfer_matrix(c), basis_input(basis)));
}

std::pair<CoincidenceProbs, CoincidenceProbs> Chip::quantum_and_classical(const PhaseConfig &c,
                                                                          int basis) const {
    const CMatrix u = transfer_matrix(c);
    const FockState in = basis_input(basis);
    return {from_postselection(two_photon_distribution(u, in)),
            from_postselection(distinguishable_distribution(u, in))};
}

CoincidenceProbs coincidence_probs(const PhaseConfig &c, int basis, Model model) {
    static const Chip chip;
    return chip.coincidence_probs(c, basis, model);
}

TwoQubitState output_state(const PhaseConfig &c, int basis) {
    if (basis < 0 || basis > 3) {
        throw std::invalid_argument("basis state index must be in 0..3");
    }
    return TwoQubitState::from_vector(two_qubit_unitary(c).col(basis));
}

std::string phase_config_to_json(const PhaseConfig &c) {
    return nlohmann::json(c.values()).dump();
}

PhaseConfig phase_config_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("phase config: ") + e.what());
    }
    if (!j.is_array() || j.size() != PhaseConfig::kCount) {
        throw std::invalid_argument("phase config: expected a JSON array of 8 numbers");
    }
    std::array<double, PhaseConfig::kCount> v{};
    for (size_t k = 0; k < v.size(); ++k) {
        if (!j[k].is_number()) {
            throw std::invalid_argument("phase config: entry " + std::to_string(k) + " is not a number");
        }
        v[k] = j[k].get<double>();
    }
    return PhaseConfig(v);
}

}  // namespace chipsim

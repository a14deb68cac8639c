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

#include <random>

#include "chipsim/netlist_json.hpp"
#include "gtest/gtest.h"

using namespace chipsim;

namespace {

PhaseConfig random_config(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    std::array<double, 8> phi{};
    for (double &p : phi) {
        p = u(gen);
    }
    return PhaseConfig(phi);
}

CMatrix ket(std::initializer_list<Complex> amps) {
    CMatrix v(static_cast<Eigen::Index>(amps.size()), 1);
    Eigen::Index k = 0;
    for (Complex a : amps) {
        v(k++, 0) = a;
    }
    return v;
}

CMatrix rz(double phi) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::exp(-kI * phi / 2.0);
    m(1, 1) = std::exp(kI * phi / 2.0);
    return m;
}

CMatrix hadamard() {
    CMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    return h / std::sqrt(2.0);
}

}  // namespace

TEST(PhaseConfig, wraps_into_range) {
    const PhaseConfig c({-0.5, 2.0 * kPi, 7.0, 0.0, 0.0, 0.0, 0.0, -4.0 * kPi});
    for (double p : c.values()) {
        EXPECT_GE(p, 0.0);
        EXPECT_LT(p, 2.0 * kPi);
    }
    EXPECT_NEAR(c.phi(1), 2.0 * kPi - 0.5, 1e-12);
    EXPECT_NEAR(c.phi(2), 0.0, 1e-12);
    EXPECT_NEAR(c.phi(3), 7.0 - 2.0 * kPi, 1e-12);
    EXPECT_THROW(c.phi(0), std::out_of_range);
    EXPECT_THROW(c.phi(9), std::out_of_range);
}

TEST(PhaseConfig, json_roundtrip) {
    std::mt19937_64 gen(30);
    const PhaseConfig c = random_config(gen);
    EXPECT_EQ(phase_config_from_json(phase_config_to_json(c)), c);
    EXPECT_THROW(phase_config_from_json("[1,2,3]"), std::invalid_argument);
}

TEST(Gates, h_prime_from_caption_factors) {
    const CMatrix expect = std::exp(kI * kPi / 2.0) * rz(kPi / 2.0) * hadamard() * rz(kPi / 2.0);
    EXPECT_LT(max_abs_diff(h_prime(), expect), 1e-12);
    CMatrix closed(2, 2);
    closed << 1.0, kI, kI, 1.0;
    EXPECT_LT(max_abs_diff(h_prime(), closed / std::sqrt(2.0)), 1e-12);
    EXPECT_LT(max_abs_diff(h_prime() * h_prime(), kI * pauli_x()), 1e-12);
    EXPECT_LT(unitarity_defect(h_prime()), 1e-12);
}

TEST(Gates, h_prime_is_the_half_coupler) {
    EXPECT_LT(max_abs_diff(h_prime(), element_matrix(Coupler{0, 1, 0.5}, 2)), 1e-12);
}

TEST(Gates, u_prep_examples) {
    EXPECT_LT(max_abs_diff(u_prep(0.0, 0.0), identity(2)), 1e-15);
    EXPECT_LT(max_abs_diff(u_prep(kPi / 2.0, 0.0) * ket({1.0, 0.0}), ket({1.0, 1.0}) / std::sqrt(2.0)), 1e-12);
    for (double z : {0.0, 1.0, 3.0}) {
        EXPECT_LT(distance_up_to_phase(u_prep(kPi, z) * ket({1.0, 0.0}), ket({0.0, 1.0})), 1e-12);
    }
    EXPECT_LT(max_abs_diff(u_meas(0.4, 1.1), u_prep(0.4, 1.1).adjoint()), 1e-15);
}

TEST(Gates, u_cnot_examples) {
    const CMatrix u = u_cnot();
    EXPECT_LT(max_abs_diff(u * ket({0, 0, 1, 0}), ket({0, 0, 0, 1})), 1e-15);
    EXPECT_LT(max_abs_diff(u * ket({1, 0, 0, 0}), ket({1, 0, 0, 0})), 1e-15);
    EXPECT_LT(max_abs_diff(u * u, identity(4)), 1e-15);
}

TEST(Gates, two_qubit_unitary) {
    EXPECT_EQ(max_abs_diff(two_qubit_unitary(PhaseConfig()), u_cnot()), 0.0);
    std::mt19937_64 gen(31);
    for (int k = 0; k < 1000; ++k) {
        EXPECT_LT(unitarity_defect(two_qubit_unitary(random_config(gen))), 1e-12);
    }
    const CMatrix bell = two_qubit_unitary(PhaseConfig().with(1, kPi / 2.0)) * ket({1, 0, 0, 0});
    EXPECT_LT(max_abs_diff(bell, ket({1, 0, 0, 1}) / std::sqrt(2.0)), 1e-12);
}

TEST(Netlist, default_layout_shape) {
    std::mt19937_64 gen(32);
    const Netlist a = default_netlist();
    const Netlist b = default_netlist(random_config(gen));
    ASSERT_EQ(a.modes, 6);
    ASSERT_EQ(a.elements.size(), b.elements.size());
    for (size_t k = 0; k < a.elements.size(); ++k) {
        EXPECT_EQ(a.elements[k].index(), b.elements[k].index());
        if (const auto *c = std::get_if<Coupler>(&a.elements[k])) {
            const auto &d = std::get<Coupler>(b.elements[k]);
            EXPECT_EQ(c->i, d.i);
            EXPECT_EQ(c->eta, d.eta);
        }
    }
    EXPECT_LT(unitarity_defect(compose(a)), 1e-12);
}

TEST(Netlist, json_roundtrip) {
    const Netlist a = default_netlist();
    const Netlist b = netlist_from_json(netlist_to_json(a));
    EXPECT_EQ(max_abs_diff(compose(a), compose(b)), 0.0);
    EXPECT_EQ(check_cnot(b).defect, check_cnot(a).defect);
    EXPECT_THROW(netlist_from_json(nlohmann::json::parse(R"({"modes":2,"elements":[{"type":"mirror"}]})")),
                 std::invalid_argument);
}

TEST(VerifyCnot, default_netlist_passes) {
    EXPECT_LT(verify_cnot(), 1e-9);
    const auto v = check_cnot(default_netlist());
    for (double s : v.success) {
        EXPECT_NEAR(s, 1.0 / 9.0, 1e-9);
    }
}

TEST(VerifyCnot, half_coupler_core_fails) {
    Netlist n = default_netlist();
    bool replaced = false;
    for (auto &e : n.elements) {
        if (auto *c = std::get_if<Coupler>(&e); c && c->i == 2 && c->j == 3) {
            c->eta = 0.5;
            replaced = true;
        }
    }
    ASSERT_TRUE(replaced);
    EXPECT_GT(check_cnot(n).defect, 0.1);
}

TEST(Coincidence, examples) {
    const auto zero = coincidence_probs(PhaseConfig(), 0, Model::gate);
    EXPECT_NEAR(zero.p[0], 1.0, 1e-12);
    const Chip chip;
    const auto wg = chip.coincidence_probs(PhaseConfig(), 0, Model::waveguide);
    EXPECT_NEAR(wg.p[0], 1.0, 1e-9);
    EXPECT_NEAR(wg.success, 1.0 / 9.0, 1e-9);
    const auto bell = chip.coincidence_probs(PhaseConfig().with(1, kPi / 2.0), 0, Model::waveguide);
    EXPECT_NEAR(bell.p[0], 0.5, 1e-9);
    EXPECT_NEAR(bell.p[1], 0.0, 1e-9);
    EXPECT_NEAR(bell.p[2], 0.0, 1e-9);
    EXPECT_NEAR(bell.p[3], 0.5, 1e-9);
}

TEST(Coincidence, gate_and_waveguide_models_agree) {
    std::mt19937_64 gen(33);
    const Chip chip;
    for (int k = 0; k < 500; ++k) {
        const PhaseConfig c = random_config(gen);
        const int basis = k % 4;
        const auto g = chip.coincidence_probs(c, basis, Model::gate);
        const auto w = chip.coincidence_probs(c, basis, Model::waveguide);
        for (size_t j = 0; j < 4; ++j) {
            ASSERT_NEAR(g.p[j], w.p[j], 1e-9) << "config " << k;
        }
        EXPECT_NEAR(w.sum(), 1.0, 1e-10);
        EXPECT_NEAR(w.success, 1.0 / 9.0, 1e-9);
    }
}

TEST(Coincidence, classical_statistics_are_normalized) {
    std::mt19937_64 gen(34);
    const Chip chip;
    const auto c = chip.classical_probs(random_config(gen), 0);
    EXPECT_NEAR(c.sum(), 1.0, 1e-10);
    EXPECT_GT(c.success, 0.0);
    EXPECT_LE(c.success, 1.0);
}

TEST(OutputState, matches_unitary_column) {
    std::mt19937_64 gen(35);
    for (int k = 0; k < 20; ++k) {
        const PhaseConfig c = random_config(gen);
        const CVector col = two_qubit_unitary(c).col(1);
        EXPECT_LT(distance_up_to_phase(output_state(c, 1).vector(), col), 1e-12);
    }
    EXPECT_NEAR(output_state(PhaseConfig()).norm(), 1.0, 1e-12);
}

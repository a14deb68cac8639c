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

#include "chipsim/optics.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace chipsim;

namespace {

Netlist random_netlist(int modes, int elements, std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> mode(0, modes - 1);
    Netlist n{modes, {}};
    for (int k = 0; k < elements; ++k) {
        if (k % 2 == 0) {
            const int i = std::uniform_int_distribution<int>(0, modes - 2)(gen);
            n.elements.push_back(Coupler{i, i + 1, u(gen)});
        } else {
            n.elements.push_back(Phase{mode(gen), 2.0 * kPi * u(gen)});
        }
    }
    return n;
}

// Two-photon amplitude written out as an explicit sum over photon paths.
Complex path_sum(const CMatrix &u, int a, int b, int c, int d) {
    Complex amp = u(c, a) * u(d, b) + u(d, a) * u(c, b);
    double norm = 1.0;
    if (a == b) {
        norm *= 2.0;
    }
    if (c == d) {
        norm *= 2.0;
    }
    return amp / std::sqrt(norm);
}

CMatrix beamsplitter() { return compose(Netlist{2, {Coupler{0, 1, 0.5}}}); }

}  // namespace

TEST(Elements, coupler_matrix) {
    const CMatrix c = element_matrix(Coupler{0, 1, 0.25}, 2);
    EXPECT_NEAR(c(0, 0).real(), std::sqrt(0.75), 1e-15);
    EXPECT_NEAR(c(0, 1).imag(), 0.5, 1e-15);
    EXPECT_NEAR(c(1, 0).imag(), 0.5, 1e-15);
    EXPECT_LT(unitarity_defect(c), 1e-15);
}

TEST(Elements, phase_matrix) {
    const CMatrix p = element_matrix(Phase{1, kPi / 3.0}, 3);
    EXPECT_LT(std::abs(p(1, 1) - std::exp(kI * kPi / 3.0)), 1e-15);
    EXPECT_LT(std::abs(p(0, 0) - 1.0), 1e-15);
}

TEST(Netlist, validation) {
    EXPECT_THROW((Netlist{2, {Coupler{0, 2, 0.5}}}.validate()), std::invalid_argument);
    EXPECT_THROW((Netlist{2, {Coupler{1, 1, 0.5}}}.validate()), std::invalid_argument);
    EXPECT_THROW((Netlist{2, {Coupler{0, 1, 1.5}}}.validate()), std::invalid_argument);
    EXPECT_THROW((Netlist{2, {Phase{-1, 0.0}}}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((Netlist{2, {Coupler{0, 1, 0.5}, Phase{1, 1.0}}}.validate()));
}

TEST(Compose, equals_product_of_element_matrices) {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Netlist n = random_netlist(6, 30, gen);
        CMatrix product = CMatrix::Identity(6, 6);
        for (const auto &e : n.elements) {
            product = element_matrix(e, 6) * product;
        }
        const CMatrix u = compose(n);
        EXPECT_LT(max_abs_diff(u, product), 1e-12);
        EXPECT_LT(unitarity_defect(u), 1e-12);
    }
}

TEST(MachZehnder, phase_tunes_splitting) {
    for (double phi : {0.0, 0.7, kPi / 2.0, kPi}) {
        const CMatrix u = compose(Netlist{2, {Coupler{0, 1, 0.5}, Phase{0, phi}, Coupler{0, 1, 0.5}}});
        EXPECT_NEAR(std::norm(u(0, 0)), std::sin(phi / 2.0) * std::sin(phi / 2.0), 1e-12);
    }
}

TEST(TwoPhoton, hong_ou_mandel) {
    const auto in = FockState::from_modes(2, {0, 1});
    const auto q = two_photon_distribution(beamsplitter(), in);
    EXPECT_NEAR(q.probability(in), 0.0, 1e-15);
    EXPECT_NEAR(q.probability(FockState({2, 0})), 0.5, 1e-12);
    const auto c = distinguishable_distribution(beamsplitter(), in);
    EXPECT_NEAR(c.probability(in), 0.5, 1e-12);
    EXPECT_NEAR(c.probability(FockState({2, 0})), 0.25, 1e-12);
}

TEST(TwoPhoton, amplitude_matches_path_sum) {
    std::mt19937_64 gen(22);
    const CMatrix u = compose(random_netlist(4, 40, gen));
    for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) {
            std::vector<int> occ_in(4, 0);
            ++occ_in[static_cast<size_t>(a)];
            ++occ_in[static_cast<size_t>(b)];
            for (const auto &out : two_photon_patterns(4)) {
                const auto m = out.photon_modes();
                const Complex expect = path_sum(u, a, b, m[0], m[1]);
                EXPECT_LT(std::abs(two_photon_amplitude(u, FockState(occ_in), out) - expect), 1e-12);
            }
        }
    }
}

TEST(TwoPhoton, distributions_are_normalized) {
    std::mt19937_64 gen(23);
    const CMatrix u = compose(random_netlist(6, 50, gen));
    const auto in = FockState::from_modes(6, {1, 3});
    EXPECT_NEAR(two_photon_distribution(u, in).total(), 1.0, 1e-12);
    EXPECT_NEAR(distinguishable_distribution(u, in).total(), 1.0, 1e-12);
    EXPECT_EQ(two_photon_patterns(6).size(), 21u);
}

TEST(TwoPhoton, rejects_wrong_photon_number) {
    EXPECT_THROW(two_photon_distribution(beamsplitter(), FockState({1, 0})), std::invalid_argument);
}

TEST(Postselect, renormalizes_and_reports_success) {
    const auto q = two_photon_distribution(beamsplitter(), FockState({1, 1}));
    const auto r = postselect(q, {FockState({2, 0})});
    EXPECT_NEAR(r.success, 0.5, 1e-12);
    EXPECT_NEAR(r.conditional.total(), 1.0, 1e-12);
    EXPECT_THROW(postselect(q, {}), std::invalid_argument);
}

TEST(Postselect, zero_success_is_flagged_empty) {
    const auto q = two_photon_distribution(CMatrix::Identity(2, 2), FockState({1, 1}));
    const auto r = postselect(q, {FockState({2, 0})});
    EXPECT_EQ(r.success, 0.0);
    EXPECT_TRUE(r.empty());
}

TEST(Fock, formatting_and_ordering) {
    const auto s = FockState::from_modes(3, {0, 2});
    EXPECT_EQ(s.photons(), 2);
    EXPECT_EQ(s.photon_modes(), (std::vector<int>{0, 2}));
    EXPECT_LT(FockState({0, 1}), FockState({1, 0}));
    EXPECT_FALSE(s.str().empty());
}

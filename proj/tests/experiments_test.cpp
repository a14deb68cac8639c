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

#include <cmath>
#include <random>
#include <sstream>

#include "chipsim/csv.hpp"
#include "gtest/gtest.h"

using namespace chipsim;

namespace {

RunOptions exact_ideal(double pairs = 1e6) {
    RunOptions o;
    o.exact = true;
    o.noise = NoiseModel::ideal(pairs);
    return o;
}

RunOptions sampled(uint64_t seed, int jobs = 1) {
    RunOptions o;
    o.seed = seed;
    o.jobs = jobs;
    return o;
}

Complex random_complex(std::mt19937_64 &gen) {
    std::normal_distribution<double> n;
    return {n(gen), n(gen)};
}

PrepAmplitudes random_amplitudes(std::mt19937_64 &gen) {
    PrepAmplitudes a{random_complex(gen), random_complex(gen), random_complex(gen), random_complex(gen)};
    const double na = std::sqrt(std::norm(a.alpha) + std::norm(a.beta));
    const double nb = std::sqrt(std::norm(a.gamma) + std::norm(a.delta));
    a.alpha /= na;
    a.beta /= na;
    a.gamma /= nb;
    a.delta /= nb;
    return a;
}

}  // namespace

TEST(PrepConfig, examples) {
    const PhaseConfig zero = prep_config(PrepAmplitudes{});
    EXPECT_EQ(zero, PhaseConfig());
    const double h = 1.0 / std::sqrt(2.0);
    const PhaseConfig bell = prep_config(PrepAmplitudes{h, h, 1.0, 0.0});
    const CVector phi_plus = (CVector(4) << h, 0.0, 0.0, h).finished();
    EXPECT_LT(distance_up_to_phase(output_state(bell).vector(), phi_plus), 1e-12);
    EXPECT_THROW(prep_config(PrepAmplitudes{1.0, 1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST(PrepConfig, forward_simulation_reproduces_product_expansion) {
    std::mt19937_64 gen(60);
    for (int k = 0; k < 200; ++k) {
        const PrepAmplitudes a = random_amplitudes(gen);
        const CVector expect = (CVector(4) << a.alpha * a.gamma, a.alpha * a.delta, a.beta * a.delta,
                                a.beta * a.gamma).finished();
        EXPECT_LT(distance_up_to_phase(output_state(prep_config(a)).vector(), expect), 1e-9);
        EXPECT_LT(distance_up_to_phase(a.output_state().vector(), expect), 1e-15);
        const PhaseConfig c = prep_config(a);
        for (int j = 5; j <= 8; ++j) {
            EXPECT_EQ(c.phi(j), 0.0);
        }
    }
}

TEST(Benchmark, noiseless_is_perfect) {
    const auto r = random_config_benchmark(995, exact_ideal());
    ASSERT_EQ(r.fidelities.size(), 995u);
    for (double f : r.fidelities) {
        ASSERT_GT(f, 1.0 - 1e-9);
    }
    EXPECT_GT(r.fraction_above(0.97), 0.999);
    EXPECT_THROW(random_config_benchmark(0, exact_ideal()), std::invalid_argument);
}

TEST(Benchmark, noisy_band) {
    const auto r = random_config_benchmark(995, sampled(1));
    EXPECT_GE(r.mean, 0.975);
    EXPECT_LE(r.mean, 0.999);
    EXPECT_GE(r.fraction_above(0.97), 0.90);
    for (double f : r.fidelities) {
        ASSERT_GE(f, 0.0);
        ASSERT_LE(f, 1.0);
    }
}

TEST(Benchmark, independent_of_jobs) {
    const auto a = random_config_benchmark(64, sampled(5, 1));
    const auto b = random_config_benchmark(64, sampled(5, 3));
    EXPECT_EQ(a.fidelities, b.fidelities);
    const auto c = random_config_benchmark(64, sampled(6, 1));
    EXPECT_NE(a.fidelities, c.fidelities);
}

TEST(BellSuite, noiseless_reconstruction) {
    const auto r = bell_state_suite(exact_ideal());
    ASSERT_EQ(r.entries.size(), 4u);
    for (const auto &e : r.entries) {
        EXPECT_GT(e.fidelity, 0.999) << e.label;
        EXPECT_NEAR(e.reconstructed.matrix().trace().real(), 1.0, 1e-10);
        EXPECT_GE(e.reconstructed.min_eigenvalue(), -1e-9);
        EXPECT_EQ(e.records.size(), 9u);
    }
    const auto &phi = r.entries[0].reconstructed;
    EXPECT_EQ(r.entries[0].label, "phi_plus");
    EXPECT_NEAR(phi(0, 0).real(), 0.5, 1e-3);
    EXPECT_NEAR(phi(3, 3).real(), 0.5, 1e-3);
    EXPECT_NEAR(phi(0, 3).real(), 0.5, 1e-3);
}

TEST(BellSuite, sampled_run_has_error_bars) {
    const auto r = bell_state_suite(sampled(7, 2));
    for (const auto &e : r.entries) {
        EXPECT_GT(e.error, 0.0);
        EXPECT_LT(e.error, 0.05);
        EXPECT_GT(e.fidelity, 0.9);
        EXPECT_LE(e.fidelity, 1.0);
    }
    const auto again = bell_state_suite(sampled(7, 1));
    for (size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(r.entries[k].fidelity, again.entries[k].fidelity);
        EXPECT_EQ(r.entries[k].records, again.entries[k].records);
    }
}

TEST(Chsh, state_examples) {
    const auto product = chsh_state(0.0);
    EXPECT_NEAR(std::abs(product.amp[3]), 1.0, 1e-12);
    const auto entangled = chsh_state(kPi / 2.0);
    const CVector expect = (CVector(4) << 1.0, 0.0, 0.0, kI).finished() / std::sqrt(2.0);
    EXPECT_LT(distance_up_to_phase(entangled.vector(), expect), 1e-12);
    const CVector conjugate = (CVector(4) << 1.0, 0.0, 0.0, -kI).finished() / std::sqrt(2.0);
    EXPECT_LT(distance_up_to_phase(chsh_state(1.5 * kPi).vector(), conjugate), 1e-12);
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int k = 0; k < 50; ++k) {
        const double a = u(gen);
        EXPECT_NEAR(chsh_state(a).norm(), 1.0, 1e-12);
        EXPECT_LT(distance_up_to_phase(output_state(chsh_prep_config(a)).vector(), chsh_state(a).vector()), 1e-9);
    }
}

TEST(Chsh, closed_form) {
    std::mt19937_64 gen(62);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int k = 0; k < 50; ++k) {
        const double a = u(gen);
        const double b = u(gen);
        EXPECT_NEAR(chsh_sum_ideal(a, b), 2.0 * std::sqrt(2.0) * std::sin(a) * std::sin(b), 1e-9);
        EXPECT_NEAR(chsh_sum(a, b, exact_ideal(), nullptr).s, chsh_sum_ideal(a, b), 1e-9);
    }
}

TEST(Chsh, product_state_respects_bound) {
    for (int k = 0; k <= 360; ++k) {
        const double b = 2.0 * kPi * k / 360.0;
        EXPECT_LE(std::abs(chsh_sum(0.0, b, exact_ideal(), nullptr).s), 2.0 + 1e-9);
    }
}

TEST(Chsh, sinusoidal_in_beta) {
    for (int i = 0; i < 16; ++i) {
        const double a = 2.0 * kPi * i / 15.0;
        Eigen::MatrixXd design(64, 3);
        Eigen::VectorXd s(64);
        for (int j = 0; j < 64; ++j) {
            const double b = 2.0 * kPi * j / 64.0;
            design.row(j) << 1.0, std::cos(b), std::sin(b);
            s(j) = chsh_sum_ideal(a, b);
        }
        const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(s);
        EXPECT_LT((design * coef - s).norm(), 1e-9);
    }
}

TEST(Chsh, sampled_requires_generator) {
    EXPECT_THROW(chsh_sum(1.0, 1.0, sampled(1), nullptr), std::invalid_argument);
}

TEST(Manifold, exact_grid) {
    const auto g = chsh_manifold(2.0 * kPi / 15.0, exact_ideal());
    ASSERT_EQ(g.alphas.size(), 16u);
    ASSERT_EQ(g.betas.size(), 16u);
    EXPECT_NEAR(g.alphas.back(), 2.0 * kPi, 1e-12);
    bool violates = false;
    for (size_t i = 0; i < 16; ++i) {
        EXPECT_NEAR(g.s[0][i], g.s[15][i], 1e-9);
        EXPECT_NEAR(g.s[i][0], g.s[i][15], 1e-9);
        for (size_t j = 0; j < 16; ++j) {
            EXPECT_NEAR(g.s[i][j], chsh_sum_ideal(g.alphas[i], g.betas[j]), 1e-12);
            violates = violates || std::abs(g.s[i][j]) > 2.0;
        }
    }
    EXPECT_TRUE(violates);
    EXPECT_NEAR(refine_chsh_extremum(g, true).s, 2.0 * std::sqrt(2.0), 1e-6);
    EXPECT_NEAR(refine_chsh_extremum(g, false).s, -2.0 * std::sqrt(2.0), 1e-6);
}

TEST(Manifold, rounded_step_keeps_sixteen_points) {
    EXPECT_EQ(chsh_manifold(0.41887902, exact_ideal()).alphas.size(), 16u);
    EXPECT_THROW(chsh_manifold(0.0, exact_ideal()), std::invalid_argument);
}

TEST(Manifold, sampled_grid_tracks_theory) {
    const auto g = chsh_manifold(2.0 * kPi / 15.0, sampled(3, 2));
    std::vector<double> m;
    std::vector<double> t;
    for (size_t i = 0; i < g.alphas.size(); ++i) {
        for (size_t j = 0; j < g.betas.size(); ++j) {
            m.push_back(g.s[i][j]);
            t.push_back(chsh_sum_ideal(g.alphas[i], g.betas[j]));
            EXPECT_GT(g.std[i][j], 0.0);
        }
    }
    EXPECT_GE(r_squared(m, t), 0.9);
    const auto h = chsh_manifold(2.0 * kPi / 15.0, sampled(3, 1));
    EXPECT_EQ(g.s, h.s);
}

TEST(RSquared, examples) {
    const std::vector<double> m = {1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(r_squared(m, m), 1.0);
    const std::vector<double> mean(4, 2.5);
    EXPECT_NEAR(r_squared(m, mean), 0.0, 1e-15);
    EXPECT_THROW(r_squared(mean, m), std::invalid_argument);
    EXPECT_THROW(r_squared(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
    EXPECT_THROW(r_squared(m, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST(MixedPrep, examples) {
    const PrepAmplitudes up = solve_mixed_prep(BlochVector{0.0, 0.0, 1.0});
    EXPECT_NEAR(std::abs(up.alpha), 1.0, 1e-12);
    EXPECT_LT(max_abs_diff(reduced_state_a(solve_mixed_prep(BlochVector{})).matrix(), identity(2) / 2.0), 1e-12);
    EXPECT_THROW(solve_mixed_prep(BlochVector{1.0, 0.5, 0.0}), std::invalid_argument);
}

TEST(MixedPrep, forward_check_on_random_targets) {
    const auto targets = sample_hs_targets(1000, 63);
    for (const auto &t : targets) {
        const PrepAmplitudes a = solve_mixed_prep(t);
        EXPECT_NO_THROW(a.validate());
        const DensityMatrix rho = reduced_state_a(a);
        EXPECT_GT(quantum_fidelity(rho, rho_of_bloch(t)), 1.0 - 1e-9);
        const BlochVector back = bloch_of_rho(rho);
        EXPECT_NEAR(back.x, t.x, 1e-6);
        EXPECT_NEAR(back.y, t.y, 1e-6);
        EXPECT_NEAR(back.z, t.z, 1e-6);
    }
}

TEST(MixedPrep, pure_and_boundary_targets) {
    for (const BlochVector t : {BlochVector{1, 0, 0}, BlochVector{0, -1, 0}, BlochVector{0, 0, -1},
                                BlochVector{0.6, 0.0, 0.8}}) {
        EXPECT_GT(quantum_fidelity(reduced_state_a(solve_mixed_prep(t)), rho_of_bloch(t)), 1.0 - 1e-9);
    }
}

TEST(MixedSuite, noiseless_reconstruction) {
    const auto targets = sample_hs_targets(119, 64);
    const auto r = mixed_state_suite(targets, exact_ideal());
    ASSERT_EQ(r.entries.size(), 119u);
    for (const auto &e : r.entries) {
        EXPECT_GT(e.fidelity, 0.999) << e.label;
        EXPECT_EQ(e.records.size(), 3u);
    }
}

TEST(MixedSuite, noisy_band) {
    const auto r = mixed_state_suite(sample_hs_targets(119, 65), sampled(65, 2));
    EXPECT_GE(r.mean_fidelity(), 0.95);
    EXPECT_GE(r.fraction_above(0.95), 0.85);
}

TEST(MixedSuite, bloch_csv) {
    std::stringstream s("rx,ry,rz\n0.1,0,0.2\n-0.5,0,0.5\n");
    const auto v = read_bloch_csv(s, "t.csv");
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[1].x, -0.5);
    std::stringstream bad("rx,ry,rz\n0.1,0,0.2\n1,1,0\n");
    try {
        read_bloch_csv(bad, "t.csv");
        FAIL();
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("t.csv:3"), std::string::npos);
    }
    std::stringstream empty("rx,ry,rz\n");
    EXPECT_THROW(read_bloch_csv(empty, "t.csv"), InputError);
}

TEST(Hom, noiseless_scan) {
    std::vector<double> delays;
    for (int k = -40; k <= 40; ++k) {
        delays.push_back(20.0 * k);
    }
    RunOptions o = exact_ideal(1e4);
    const auto perfect = hom_scan(delays, SpectralModel(), o);
    EXPECT_NEAR(perfect.points[40].expected, 0.0, 1e-9);
    EXPECT_NEAR(perfect.visibility, 1.0, 1e-9);
    o.noise.visibility = 0.978;
    const auto partial = hom_scan(delays, SpectralModel(), o);
    EXPECT_NEAR(partial.visibility, 0.978, 1e-9);
    EXPECT_NEAR(partial.plateau, 5000.0, 1e-6);
    EXPECT_NEAR(partial.width_fs, coherence_time_fs(SpectralModel()), 1e-6);
}

TEST(Hom, sampled_visibility) {
    std::vector<double> delays;
    for (int k = -40; k <= 40; ++k) {
        delays.push_back(20.0 * k);
    }
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        RunOptions o = sampled(seed);
        o.noise.visibility = 0.978;
        o.noise.mean_pairs = 1e4;
        EXPECT_NEAR(hom_scan(delays, SpectralModel(), o).visibility, 0.978, 0.01);
    }
}

TEST(Hom, accidentals_are_removed) {
    std::vector<double> delays;
    for (int k = -40; k <= 40; ++k) {
        delays.push_back(20.0 * k);
    }
    RunOptions o = exact_ideal(1e4);
    o.noise.visibility = 0.9;
    o.noise.accidental_fraction = 0.2;
    EXPECT_NEAR(hom_scan(delays, SpectralModel(), o).visibility, 0.9, 1e-9);
}

TEST(Fringe, outputs_are_complementary) {
    std::vector<double> volts;
    for (int k = 0; k <= 70; ++k) {
        volts.push_back(0.1 * k);
    }
    const HeaterCurve h{0.3, 0.12, 0.01, 0.001};
    for (int heater = 1; heater <= 8; ++heater) {
        const auto s = fringe_scan(heater, volts, h, 1.0, exact_ideal(1e4));
        const double total = s.expected[0][0] + s.expected[1][0];
        for (size_t k = 0; k < volts.size(); ++k) {
            EXPECT_NEAR(s.expected[0][k] + s.expected[1][k], total, 1e-9) << "heater " << heater;
        }
        // Full visibility: one output goes dark wherever the phase is a multiple of pi.
        const std::vector<double> dark = {voltage_of_phase(h, 2.0 * kPi), voltage_of_phase(h, 3.0 * kPi)};
        const auto d = fringe_scan(heater, dark, h, 1.0, exact_ideal(1e4));
        for (size_t k = 0; k < dark.size(); ++k) {
            EXPECT_NEAR(std::min(d.expected[0][k], d.expected[1][k]), 0.0, 1e-6 * total) << "heater " << heater;
        }
        EXPECT_GT(std::abs(d.expected[0][0] - d.expected[0][1]), 0.99 * total) << "heater " << heater;
    }
    EXPECT_THROW(fringe_scan(0, volts, h, 1.0, exact_ideal()), std::invalid_argument);
    EXPECT_THROW(fringe_scan(1, volts, h, 1.5, exact_ideal()), std::invalid_argument);
}

TEST(Fringe, fit_recovers_generating_curve) {
    std::vector<double> volts;
    for (int k = 0; k <= 140; ++k) {
        volts.push_back(0.05 * k);
    }
    const HeaterCurve h{0.3, 0.12, 0.01, 0.001};
    for (int heater = 1; heater <= 8; ++heater) {
        for (double contrast : {1.0, 0.988}) {
            const auto s = fringe_scan(heater, volts, h, contrast, exact_ideal(1e4));
            for (int out = 0; out < 2; ++out) {
                const FringeFit f = fit_fringe(s.output(out));
                EXPECT_NEAR(f.contrast, contrast, 1e-6);
                EXPECT_NEAR(f.curve.a2, h.a2, 1e-4);
                EXPECT_NEAR(f.curve.a3, h.a3, 1e-4);
                EXPECT_NEAR(f.curve.a4, h.a4, 1e-4);
                // The fixed offsets of the layout shift a0 by a multiple of pi.
                const double shift = std::remainder(f.curve.a0 - h.a0, kPi);
                EXPECT_NEAR(shift, 0.0, 1e-4);
            }
        }
    }
}

TEST(Fringe, device_grade_mean_contrast) {
    std::vector<double> volts;
    for (int k = 0; k <= 140; ++k) {
        volts.push_back(0.05 * k);
    }
    const HeaterCurve h{0.3, 0.12, 0.01, 0.001};
    double sum = 0.0;
    int n = 0;
    for (int heater = 1; heater <= 8; ++heater) {
        RunOptions o = sampled(70 + heater);
        o.noise.mean_pairs = 1e5;
        const auto s = fringe_scan(heater, volts, h, 0.988, o);
        for (int out = 0; out < 2; ++out) {
            sum += fit_fringe(s.output(out)).contrast;
            ++n;
        }
    }
    EXPECT_NEAR(sum / n, 0.988, 0.005);
}

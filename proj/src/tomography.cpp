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

#include "chipsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace chipsim {

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4)) {
        throw std::invalid_argument("DensityMatrix: dimension must be 2 or 4");
    }
    if (hermiticity_defect(m_) > 1e-10) {
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - 1.0) > 1e-10) {
        throw std::invalid_argument("DensityMatrix: trace must be 1");
    }
    if (min_eigenvalue() < -1e-9) {
        throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::pure(const CVector &psi) {
    const double n = psi.norm();
    if (n == 0.0) {
        throw std::invalid_argument("DensityMatrix::pure: zero vector");
    }
    const CVector v = psi / n;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(m_).minCoeff(); }

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

PhaseConfig MeasurementSetting::apply_to(const PhaseConfig &base) const {
    if (qubits.empty() || qubits.size() > 2) {
        throw std::invalid_argument("MeasurementSetting: one or two qubits expected");
    }
    PhaseConfig c = base.with(5, qubits[0].phi_y).with(6, qubits[0].phi_z);
    if (qubits.size() == 2) {
        return c.with(7, qubits[1].phi_y).with(8, qubits[1].phi_z);
    }
    return c.with(7, 0.0).with(8, 0.0);
}

namespace {

/// Outcome kets u_prep(phi_y, phi_z)|k>, tensored over qubits.
std::vector<CVector> outcome_kets(const MeasurementSetting &s) {
    if (s.qubits.empty() || s.qubits.size() > 2) {
        throw std::invalid_argument("MeasurementSetting: one or two qubits expected");
    }
    std::vector<CMatrix> bases;
    for (const auto &q : s.qubits) {
        bases.push_back(u_prep(q.phi_y, q.phi_z));
    }
    const CMatrix joint = bases.size() == 1 ? bases[0] : tensor(bases[0], bases[1]);
    std::vector<CVector> out;
    for (Eigen::Index k = 0; k < joint.cols(); ++k) {
        out.emplace_back(joint.col(k));
    }
    return out;
}

constexpr AnalysisAngles basis_angles(char letter) {
    switch (letter) {
        case 'z':
            return {0.0, 0.0};
        case 'x':
            return {kPi / 2, 0.0};
        case 'y':
            return {kPi / 2, kPi / 2};
        default:
            return {-1.0, -1.0};
    }
}

}  // namespace

std::vector<CMatrix> projectors_of_setting(const MeasurementSetting &s) {
    std::vector<CMatrix> out;
    for (const auto &ket : outcome_kets(s)) {
        out.emplace_back(ket * ket.adjoint());
    }
    return out;
}

MeasurementSetting setting_from_label(const std::string &label) {
    if (label.empty() || label.size() > 2) {
        throw std::invalid_argument("setting label must have one or two basis letters: \"" + label + "\"");
    }
    MeasurementSetting s;
    s.label = label;
    for (char ch : label) {
        const auto angles = basis_angles(ch);
        if (angles.phi_y < 0.0) {
            throw std::invalid_argument("unknown basis letter in setting label \"" + label + "\"");
        }
        s.qubits.push_back(angles);
    }
    return s;
}

std::vector<MeasurementSetting> canonical_settings(int qubits) {
    static constexpr char letters[] = {'z', 'x', 'y'};
    std::vector<MeasurementSetting> out;
    if (qubits == 1) {
        for (char a : letters) {
            out.push_back(setting_from_label(std::string(1, a)));
        }
    } else if (qubits == 2) {
        for (char a : letters) {
            for (char b : letters) {
                out.push_back(setting_from_label(std::string{a, b}));
            }
        }
    } else {
        throw std::invalid_argument("canonical_settings: qubits must be 1 or 2");
    }
    return out;
}

std::vector<double> outcome_probabilities(const DensityMatrix &rho, const MeasurementSetting &s) {
    const auto kets = outcome_kets(s);
    if (static_cast<int>(kets.size()) != rho.dim()) {
        throw std::invalid_argument("outcome_probabilities: setting does not match state dimension");
    }
    std::vector<double> p;
    for (const auto &ket : kets) {
        p.push_back(std::max(0.0, (ket.adjoint() * rho.matrix() * ket)(0, 0).real()));
    }
    return p;
}

std::vector<double> outcome_counts(const CountRecord &r, int qubits) {
    if (qubits == 2) {
        return {static_cast<double>(r.n[0]), static_cast<double>(r.n[1]), static_cast<double>(r.n[2]),
                static_cast<double>(r.n[3])};
    }
    if (qubits == 1) {
        return {static_cast<double>(r.n[0] + r.n[1]), static_cast<double>(r.n[2] + r.n[3])};
    }
    throw std::invalid_argument("outcome_counts: qubits must be 1 or 2");
}

namespace {

constexpr double kProbabilityFloor = 1e-12;

struct LikelihoodProblem {
    int dim = 0;
    std::vector<CVector> kets;
    std::vector<double> counts;
    std::vector<double> setting_totals;  // N_s for each ket's setting
    double total = 0.0;

    CMatrix lower_triangular(const Eigen::VectorXd &x) const {
        CMatrix t = CMatrix::Zero(dim, dim);
        Eigen::Index k = 0;
        for (int r = 0; r < dim; ++r) {
            t(r, r) = x(k++);
        }
        for (int r = 1; r < dim; ++r) {
            for (int c = 0; c < r; ++c) {
                t(r, c) = Complex(x(k), x(k + 1));
                k += 2;
            }
        }
        return t;
    }

    // Mean negative log-likelihood per detected event.
    double objective(const Eigen::VectorXd &x) const {
        const CMatrix t = lower_triangular(x);
        const double norm = t.squaredNorm();
        if (!(norm > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        double f = 0.0;
        for (size_t k = 0; k < kets.size(); ++k) {
            if (counts[k] == 0.0) {
                continue;
            }
            const double p = std::max((t * kets[k]).squaredNorm() / norm, kProbabilityFloor);
            f -= counts[k] * std::log(p);
        }
        return f / total;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd &x) const {
        Eigen::VectorXd g(x.size());
        Eigen::VectorXd probe = x;
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double h = 1e-7 * std::max(1.0, std::abs(x(k)));
            probe(k) = x(k) + h;
            const double up = objective(probe);
            probe(k) = x(k) - h;
            const double down = objective(probe);
            probe(k) = x(k);
            g(k) = (up - down) / (2.0 * h);
        }
        return g;
    }

    DensityMatrix state(const Eigen::VectorXd &x) const {
        const CMatrix t = lower_triangular(x);
        CMatrix rho = t.adjoint() * t;
        rho /= rho.trace().real();
        rho = 0.5 * (rho + rho.adjoint());
        return DensityMatrix(rho);
    }

    // sum_k [n_k log(N_s p_k) - N_s p_k]
    double log_likelihood(const DensityMatrix &rho) const {
        double ll = 0.0;
        for (size_t k = 0; k < kets.size(); ++k) {
            const double p =
                std::max((kets[k].adjoint() * rho.matrix() * kets[k])(0, 0).real(), kProbabilityFloor);
            const double mean = setting_totals[k] * p;
            if (counts[k] > 0.0) {
                ll += counts[k] * std::log(mean);
            }
            ll -= mean;
        }
        return ll;
    }
};

}  // namespace

MLEResult mle_reconstruct(std::span<const MeasurementSetting> settings, std::span<const std::vector<double>> counts) {
    if (settings.size() != counts.size() || settings.empty()) {
        throw std::invalid_argument("mle_reconstruct: counts must align with settings");
    }
    LikelihoodProblem prob;
    const int qubits = settings[0].qubit_count();
    prob.dim = qubits == 1 ? 2 : 4;
    for (size_t s = 0; s < settings.size(); ++s) {
        if (settings[s].qubit_count() != qubits) {
            throw std::invalid_argument("mle_reconstruct: settings mix qubit counts");
        }
        const auto kets = outcome_kets(settings[s]);
        if (counts[s].size() != kets.size()) {
            throw std::invalid_argument("mle_reconstruct: setting " + settings[s].label + " has " +
                                        std::to_string(counts[s].size()) + " counts, expected " +
                                        std::to_string(kets.size()));
        }
        double setting_total = 0.0;
        for (double n : counts[s]) {
            if (!(n >= 0.0) || !std::isfinite(n)) {
                throw std::invalid_argument("mle_reconstruct: counts must be finite and non-negative");
            }
            setting_total += n;
        }
        for (size_t k = 0; k < kets.size(); ++k) {
            prob.kets.push_back(kets[k]);
            prob.counts.push_back(counts[s][k]);
            prob.setting_totals.push_back(setting_total);
        }
        prob.total += setting_total;
    }
    if (!(prob.total > 0.0)) {
        throw std::invalid_argument("mle_reconstruct: total counts must be positive");
    }

    // Start from the maximally mixed state, T = I.
    const Eigen::Index n = prob.dim * prob.dim;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x.head(prob.dim).setOnes();
    double f = prob.objective(x);
    Eigen::VectorXd g = prob.gradient(x);
    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);

    constexpr int kBudget = 5000;
    constexpr double kImprovementTolerance = 1e-10;
    MLEResult result{prob.state(x), 0.0, 0, false};
    int quiet = 0;
    int it = 0;
    for (; it < kBudget; ++it) {
        if (g.lpNorm<Eigen::Infinity>() < 1e-10) {
            result.converged = true;
            break;
        }
        Eigen::VectorXd dir = -h_inv * g;
        if (dir.dot(g) >= 0.0) {
            h_inv.setIdentity();
            dir = -g;
        }
        double step = 1.0;
        double f_new = f;
        Eigen::VectorXd x_new = x;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = x + step * dir;
            f_new = prob.objective(x_new);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * dir.dot(g)) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            if (h_inv.isIdentity()) {
                // Line search cannot improve even along the gradient.
                result.converged = true;
                break;
            }
            h_inv.setIdentity();
            continue;
        }
        const Eigen::VectorXd g_new = prob.gradient(x_new);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-16) {
            const double rho_k = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            h_inv = (eye - rho_k * s * y.transpose()) * h_inv * (eye - rho_k * y * s.transpose()) +
                    rho_k * s * s.transpose();
        }
        // Improvement measured on the total log-likelihood scale.
        const double improvement = (f - f_new) * prob.total;
        x = x_new;
        g = g_new;
        f = f_new;
        quiet = improvement < kImprovementTolerance ? quiet + 1 : 0;
        if (quiet >= 3) {
            result.converged = true;
            ++it;
            break;
        }
    }
    result.rho = prob.state(x);
    result.log_likelihood = prob.log_likelihood(result.rho);
    result.iterations = it;
    return result;
}

MLEResult mle_reconstruct(std::span<const MeasurementSetting> settings, std::span<const CountRecord> counts) {
    if (settings.size() != counts.size()) {
        throw std::invalid_argument("mle_reconstruct: counts must align with settings");
    }
    std::vector<std::vector<double>> table;
    for (size_t k = 0; k < counts.size(); ++k) {
        table.push_back(outcome_counts(counts[k], settings[k].qubit_count()));
    }
    return mle_reconstruct(settings, table);
}

double statistical_fidelity(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("statistical_fidelity: length mismatch");
    }
    double f = 0.0;
    for (size_t k = 0; k < p.size(); ++k) {
        f += std::sqrt(std::max(p[k], 0.0) * std::max(q[k], 0.0));
    }
    return std::clamp(f, 0.0, 1.0);
}

double statistical_fidelity(const CoincidenceProbs &p, const CoincidenceProbs &q) {
    return statistical_fidelity(std::span<const double>(p.p), std::span<const double>(q.p));
}

double quantum_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("quantum_fidelity: dimension mismatch");
    }
    // Clamp the spectrum first so states grazing the PSD boundary pass psd_sqrt.
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const CMatrix rho_psd = es.eigenvectors() * lam.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    const CMatrix root = psd_sqrt(0.5 * (rho_psd + rho_psd.adjoint()));
    CMatrix inner = root * sigma.matrix() * root;
    inner = 0.5 * (inner + inner.adjoint());
    const Eigen::VectorXd mu = Eigen::SelfAdjointEigenSolver<CMatrix>(inner).eigenvalues();
    double tr = 0.0;
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        tr += std::sqrt(std::max(mu(k), 0.0));
    }
    return std::clamp(tr * tr, 0.0, 1.0);
}

DensityMatrix partial_trace(const DensityMatrix &rho, Subsystem keep) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("partial_trace: expected a two-qubit state");
    }
    CMatrix out = CMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                out(i, j) += keep == Subsystem::A ? rho(2 * i + k, 2 * j + k) : rho(2 * k + i, 2 * k + j);
            }
        }
    }
    return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix sample_hs_random(int dim, Rng &rng) {
    if (dim != 2 && dim != 4) {
        throw std::invalid_argument("sample_hs_random: dim must be 2 or 4");
    }
    CMatrix g(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

BlochVector bloch_of_rho(const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw std::invalid_argument("bloch_of_rho: expected a single-qubit state");
    }
    return {(rho.matrix() * pauli_x()).trace().real(), (rho.matrix() * pauli_y()).trace().real(),
            (rho.matrix() * pauli_z()).trace().real()};
}

DensityMatrix rho_of_bloch(const BlochVector &b) {
    const double n = b.norm();
    if (!(n <= 1.0 + 1e-9)) {
        throw std::invalid_argument("rho_of_bloch: Bloch vector longer than 1");
    }
    const double s = n > 1.0 ? 1.0 / n : 1.0;
    const CMatrix m = 0.5 * (identity(2) + s * (b.x * pauli_x() + b.y * pauli_y() + b.z * pauli_z()));
    return DensityMatrix(m);
}

double monte_carlo_error(std::span<const CountRecord> counts,
                         const std::function<double(std::span<const CountRecord>)> &estimator, int trials,
                         Rng &rng) {
    if (trials < 2) {
        throw std::invalid_argument("monte_carlo_error: need at least 2 trials");
    }
    std::vector<double> values;
    values.reserve(static_cast<size_t>(trials));
    std::vector<CountRecord> resampled(counts.begin(), counts.end());
    for (int t = 0; t < trials; ++t) {
        for (size_t r = 0; r < counts.size(); ++r) {
            for (size_t k = 0; k < 4; ++k) {
                resampled[r].n[k] = rng.poisson(static_cast<double>(counts[r].n[k]));
            }
        }
        values.push_back(estimator(resampled));
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= trials;
    double var = 0.0;
    for (double v : values) {
        var += (v - mean) * (v - mean);
    }
    return std::sqrt(var / (trials - 1));
}

double monte_carlo_error(const CountRecord &counts, const std::function<double(const CountRecord &)> &estimator,
                         int trials, Rng &rng) {
    return monte_carlo_error(
        std::span<const CountRecord>(&counts, 1),
        [&estimator](std::span<const CountRecord> r) { return estimator(r[0]); }, trials, rng);
}

std::string density_to_json(const DensityMatrix &rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < rho.dim(); ++c) {
            row.push_back({rho(r, c).real(), rho(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows.dump();
}

DensityMatrix density_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("density matrix: ") + e.what());
    }
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("density matrix: expected nested arrays");
    }
    const auto dim = static_cast<Eigen::Index>(j.size());
    CMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const auto &row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
            throw std::invalid_argument("density matrix: row " + std::to_string(r) + " has wrong length");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const auto &e = row[static_cast<size_t>(c)];
            if (!e.is_array() || e.size() != 2) {
                throw std::invalid_argument("density matrix: entries must be [re, im] pairs");
            }
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return DensityMatrix(m);
}

}  // namespace chipsim

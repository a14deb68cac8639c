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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chipsim {

namespace {

void check_mode(int m, int modes, const char *what) {
    if (m < 0 || m >= modes) {
        throw std::invalid_argument(std::string(what) + ": mode index " + std::to_string(m) +
                                    " out of range for " + std::to_string(modes) + " modes");
    }
}

void check_element(const Element &e, int modes) {
    if (const auto *c = std::get_if<Coupler>(&e)) {
        check_mode(c->i, modes, "coupler");
        check_mode(c->j, modes, "coupler");
        if (c->i == c->j) {
            throw std::invalid_argument("coupler: modes i and j must differ");
        }
        if (!(c->eta >= 0.0 && c->eta <= 1.0)) {
            throw std::invalid_argument("coupler: eta must lie in [0, 1]");
        }
    } else {
        check_mode(std::get<Phase>(e).i, modes, "phase");
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

void require_two_photons(const FockState &s, int modes, const char *who) {
    if (s.modes() != modes) {
        throw std::invalid_argument(std::string(who) + ": state has wrong mode count");
    }
    if (s.photons() != 2) {
        throw std::invalid_argument(std::string(who) + ": expected exactly two photons");
    }
}

}  // namespace

void Netlist::validate() const {
    if (modes <= 0) {
        throw std::invalid_argument("netlist: mode count must be positive");
    }
    for (const auto &e : elements) {
        check_element(e, modes);
    }
}

FockState FockState::from_modes(int modes, std::initializer_list<int> occupied) {
    std::vector<int> occ(static_cast<size_t>(modes), 0);
    for (int m : occupied) {
        check_mode(m, modes, "fock state");
        ++occ[static_cast<size_t>(m)];
    }
    return FockState(std::move(occ));
}

int FockState::photons() const {
    int n = 0;
    for (int k : occupations) {
        n += k;
    }
    return n;
}

std::vector<int> FockState::photon_modes() const {
    std::vector<int> out;
    for (int m = 0; m < modes(); ++m) {
        for (int k = 0; k < occupations[static_cast<size_t>(m)]; ++k) {
            out.push_back(m);
        }
    }
    return out;
}

std::string FockState::str() const {
    std::ostringstream os;
    os << '(';
    for (size_t k = 0; k < occupations.size(); ++k) {
        os << (k ? "," : "") << occupations[k];
    }
    os << ')';
    return os.str();
}

double PhotonDistribution::probability(const FockState &s) const {
    for (size_t k = 0; k < patterns.size(); ++k) {
        if (patterns[k] == s) {
            return probs[k];
        }
    }
    return 0.0;
}

double PhotonDistribution::total() const {
    double t = 0.0;
    for (double p : probs) {
        t += p;
    }
    return t;
}

CMatrix element_matrix(const Element &e, int modes) {
    check_element(e, modes);
    CMatrix m = CMatrix::Identity(modes, modes);
    if (const auto *c = std::get_if<Coupler>(&e)) {
        const double through = std::sqrt(1.0 - c->eta);
        const Complex cross = kI * std::sqrt(c->eta);
        m(c->i, c->i) = through;
        m(c->j, c->j) = through;
        m(c->i, c->j) = cross;
        m(c->j, c->i) = cross;
    } else {
        const auto &p = std::get<Phase>(e);
        m(p.i, p.i) = std::polar(1.0, p.phi);
    }
    return m;
}

CMatrix compose(const Netlist &n) {
    n.validate();
    CMatrix u = CMatrix::Identity(n.modes, n.modes);
    // Each element touches at most two rows, so update rows in place rather
    // than multiplying full matrices.
    for (const auto &e : n.elements) {
        if (const auto *c = std::get_if<Coupler>(&e)) {
            const double t = std::sqrt(1.0 - c->eta);
            const Complex r = kI * std::sqrt(c->eta);
            const Eigen::RowVectorXcd ri = u.row(c->i);
            const Eigen::RowVectorXcd rj = u.row(c->j);
            u.row(c->i) = t * ri + r * rj;
            u.row(c->j) = r * ri + t * rj;
        } else {
            const auto &p = std::get<Phase>(e);
            u.row(p.i) *= std::polar(1.0, p.phi);
        }
    }
    return u;
}

std::vector<FockState> two_photon_patterns(int modes) {
    std::vector<FockState> out;
    out.reserve(static_cast<size_t>(modes * (modes + 1) / 2));
    for (int i = 0; i < modes; ++i) {
        for (int j = i; j < modes; ++j) {
            std::vector<int> occ(static_cast<size_t>(modes), 0);
            ++occ[static_cast<size_t>(i)];
            ++occ[static_cast<size_t>(j)];
            out.emplace_back(std::move(occ));
        }
    }
    return out;
}

Complex two_photon_amplitude(const CMatrix &u, const FockState &input, const FockState &output) {
    const int modes = static_cast<int>(u.rows());
    require_two_photons(input, modes, "two_photon_amplitude");
    require_two_photons(output, modes, "two_photon_amplitude");
    const auto in = input.photon_modes();
    const auto out = output.photon_modes();
    CMatrix sub(2, 2);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            sub(r, c) = u(out[static_cast<size_t>(r)], in[static_cast<size_t>(c)]);
        }
    }
    double norm = 1.0;
    for (int k : input.occupations) {
        norm *= factorial(k);
    }
    for (int k : output.occupations) {
        norm *= factorial(k);
    }
    return permanent(sub) / std::sqrt(norm);
}

PhotonDistribution two_photon_distribution(const CMatrix &u, const FockState &input) {
    const int modes = static_cast<int>(u.rows());
    require_two_photons(input, modes, "two_photon_distribution");
    PhotonDistribution d;
    d.patterns = two_photon_patterns(modes);
    d.probs.reserve(d.patterns.size());
    for (const auto &out : d.patterns) {
        d.probs.push_back(std::norm(two_photon_amplitude(u, input, out)));
    }
    return d;
}

PhotonDistribution distinguishable_distribution(const CMatrix &u, const FockState &input) {
    const int modes = static_cast<int>(u.rows());
    require_two_photons(input, modes, "distinguishable_distribution");
    const auto in = input.photon_modes();
    PhotonDistribution d;
    d.patterns = two_photon_patterns(modes);
    d.probs.assign(d.patterns.size(), 0.0);
    size_t k = 0;
    for (int i = 0; i < modes; ++i) {
        for (int j = i; j < modes; ++j, ++k) {
            const double a = std::norm(u(i, in[0])) * std::norm(u(j, in[1]));
            const double b = std::norm(u(j, in[0])) * std::norm(u(i, in[1]));
            d.probs[k] = (i == j) ? a : a + b;
        }
    }
    return d;
}

PostselectResult postselect(const PhotonDistribution &dist, const std::vector<FockState> &accepted) {
    if (accepted.empty()) {
        throw std::invalid_argument("postselect: accepted set must be non-empty");
    }
    PostselectResult result;
    std::vector<double> mass;
    for (const auto &s : accepted) {
        mass.push_back(dist.probability(s));
        result.success += mass.back();
    }
    if (result.success <= 0.0) {
        result.success = 0.0;
        return result;
    }
    for (size_t k = 0; k < accepted.size(); ++k) {
        result.conditional.patterns.push_back(accepted[k]);
        result.conditional.probs.push_back(mass[k] / result.success);
    }
    return result;
}

}  // namespace chipsim

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

#include <compare>
#include <string>
#include <variant>
#include <vector>

#include "chipsim/numerics.hpp"

namespace chipsim {

/// Directional coupler between modes i and j. eta is the cross-coupled power
/// fraction; the (i, j) block is [[sqrt(1-eta), i sqrt(eta)], [i sqrt(eta), sqrt(1-eta)]].
struct Coupler {
    int i = 0;
    int j = 1;
    double eta = 0.5;
};

/// Phase shifter multiplying mode i by exp(i phi).
///
/// `heater` binds the element to a control phase (1-based, as in phi_1..phi_8);
/// zero marks a fixed element whose value never changes.
struct Phase {
    int i = 0;
    double phi = 0.0;
    int heater = 0;
};

using Element = std::variant<Coupler, Phase>;

/// Ordered list of elements, first element acts first.
struct Netlist {
    int modes = 0;
    std::vector<Element> elements;

    /// Throws std::invalid_argument if any element references a bad mode or
    /// a coupler has eta outside [0, 1].
    void validate() const;
};

struct FockState {
    std::vector<int> occupations;

    FockState() = default;
    explicit FockState(std::vector<int> occ) : occupations(std::move(occ)) {}

    /// One photon in each listed mode; repeated modes stack.
    static FockState from_modes(int modes, std::initializer_list<int> occupied);

    int modes() const { return static_cast<int>(occupations.size()); }
    int photons() const;
    /// Mode index of each photon, ascending, with repetition.
    std::vector<int> photon_modes() const;
    std::string str() const;

    auto operator<=>(const FockState &) const = default;
};

/// Probabilities over every two-photon occupation pattern of a fixed mode count,
/// stored densely in the order returned by two_photon_patterns().
struct PhotonDistribution {
    std::vector<FockState> patterns;
    std::vector<double> probs;

    /// Probability of `s`; zero if the pattern is absent.
    double probability(const FockState &s) const;
    double total() const;
};

struct PostselectResult {
    /// Conditional distribution restricted to accepted patterns. Empty when
    /// nothing was accepted.
    PhotonDistribution conditional;
    double success = 0.0;

    bool empty() const { return conditional.patterns.empty(); }
};

CMatrix element_matrix(const Element &e, int modes);

/// Product of element matrices in netlist order (identity when empty).
CMatrix compose(const Netlist &n);

/// All two-photon patterns on `modes` modes: (2 at k) and (1 at i, 1 at j),
/// ordered by the (i <= j) photon-mode pair.
std::vector<FockState> two_photon_patterns(int modes);

/// Bosonic amplitude <output| U |input> for two photons.
Complex two_photon_amplitude(const CMatrix &u, const FockState &input, const FockState &output);

PhotonDistribution two_photon_distribution(const CMatrix &u, const FockState &input);

/// Output statistics for two mutually distinguishable photons, each routed
/// independently with probabilities |u_ij|^2.
PhotonDistribution distinguishable_distribution(const CMatrix &u, const FockState &input);

/// Keeps mass on `accepted` patterns and renormalizes it. Throws if
/// `accepted` is empty.
PostselectResult postselect(const PhotonDistribution &dist, const std::vector<FockState> &accepted);

}  // namespace chipsim

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

#include "chipsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace chipsim {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::child(uint64_t master, uint64_t index) {
    return Rng(splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    // 1 - u keeps the logarithm finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson: mean must be finite and non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }
    if (mean < 30.0) {
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        uint64_t k = 0;
        while (u >= cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            // Guard against cdf saturating just below u in floating point.
            if (p < 1e-300 && k > mean) {
                break;
            }
        }
        return k;
    }
    const double x = std::round(mean + std::sqrt(mean) * normal());
    return x <= 0.0 ? 0 : static_cast<uint64_t>(x);
}

}  // namespace chipsim

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

#include <cstdint>
#include <random>

namespace chipsim {

/// Seeded generator with platform-independent sampling.
///
/// Distributions from <random> are implementation-defined, so uniform,
/// normal and Poisson draws are derived here from raw mt19937_64 output.
/// That keeps sampled results byte-identical across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Independent child stream for task `index` of a sweep seeded by `master`.
    static Rng child(uint64_t master, uint64_t index);

    uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller, no cached second value).
    double normal();
    double normal(double mean, double sigma) { return mean + sigma * normal(); }
    /// Poisson draw: inversion below mean 30, rounded Gaussian above.
    uint64_t poisson(double mean);

  private:
    std::mt19937_64 engine_;
};

uint64_t splitmix64(uint64_t x);

}  // namespace chipsim

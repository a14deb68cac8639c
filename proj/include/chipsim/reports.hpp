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

#include <iosfwd>
#include <string>

#include "chipsim/calibration.hpp"
#include "chipsim/experiments.hpp"
#include "json.hpp"

namespace chipsim {

/// Version of every JSON report; bump on incompatible changes.
inline constexpr int kReportSchema = 1;

/// Shortest round-trip decimal form, used for every CSV number.
std::string format_number(double x);

nlohmann::json run_to_json(const RunOptions &opts);
nlohmann::json density_json(const DensityMatrix &rho);

nlohmann::json benchmark_to_json(const BenchmarkReport &r, double threshold);
void write_benchmark_csv(std::ostream &out, const BenchmarkReport &r);

nlohmann::json suite_to_json(const SuiteReport &r, double threshold);
void write_suite_csv(std::ostream &out, const SuiteReport &r);

nlohmann::json manifold_to_json(const ManifoldGrid &g);
/// `alpha,beta,S,std`, alpha-major.
void write_manifold_csv(std::ostream &out, const ManifoldGrid &g);

nlohmann::json hom_to_json(const HomScan &s);
void write_hom_csv(std::ostream &out, const HomScan &s);

nlohmann::json fringe_json(const FringeFit &fit);

/// Adds the top-level schema field.
nlohmann::json with_schema(nlohmann::json body, const std::string &command);

}  // namespace chipsim

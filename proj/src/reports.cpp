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

#include "chipsim/reports.hpp"

#include <charconv>
#include <ostream>

namespace chipsim {

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

nlohmann::json run_to_json(const RunOptions &opts) {
    return {{"seed", opts.seed},
            {"exact", opts.exact},
            {"noise",
             {{"phase_sigma", opts.noise.phase_sigma},
              {"visibility", opts.noise.visibility},
              {"accidental_fraction", opts.noise.accidental_fraction},
              {"mean_pairs", opts.noise.mean_pairs}}}};
}

nlohmann::json density_json(const DensityMatrix &rho) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < rho.dim(); ++c) {
            row.push_back({rho(r, c).real(), rho(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json benchmark_to_json(const BenchmarkReport &r, double threshold) {
    return {{"n", r.fidelities.size()},
            {"mean", r.mean},
            {"std", r.std},
            {"threshold", threshold},
            {"fraction_above", r.fraction_above(threshold)},
            {"fidelities", r.fidelities}};
}

void write_benchmark_csv(std::ostream &out, const BenchmarkReport &r) {
    out << "index,fidelity\n";
    for (size_t k = 0; k < r.fidelities.size(); ++k) {
        out << k << ',' << format_number(r.fidelities[k]) << '\n';
    }
}

nlohmann::json suite_to_json(const SuiteReport &r, double threshold) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &e : r.entries) {
        entries.push_back({{"label", e.label},
                           {"fidelity", e.fidelity},
                           {"error", e.error},
                           {"target", density_json(e.target)},
                           {"reconstructed", density_json(e.reconstructed)}});
    }
    return {{"mean_fidelity", r.mean_fidelity()},
            {"std_fidelity", r.std_fidelity()},
            {"threshold", threshold},
            {"fraction_above", r.fraction_above(threshold)},
            {"entries", std::move(entries)}};
}

void write_suite_csv(std::ostream &out, const SuiteReport &r) {
    out << "label,fidelity,error\n";
    for (const auto &e : r.entries) {
        out << e.label << ',' << format_number(e.fidelity) << ',' << format_number(e.error) << '\n';
    }
}

nlohmann::json manifold_to_json(const ManifoldGrid &g) {
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const auto &row : g.s) {
        for (double v : row) {
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    return {{"alphas", g.alphas}, {"betas", g.betas}, {"S", g.s}, {"std", g.std}, {"min", lo}, {"max", hi}};
}

void write_manifold_csv(std::ostream &out, const ManifoldGrid &g) {
    out << "alpha,beta,S,std\n";
    for (size_t i = 0; i < g.alphas.size(); ++i) {
        for (size_t j = 0; j < g.betas.size(); ++j) {
            out << format_number(g.alphas[i]) << ',' << format_number(g.betas[j]) << ','
                << format_number(g.s[i][j]) << ',' << format_number(g.std[i][j]) << '\n';
        }
    }
}

nlohmann::json hom_to_json(const HomScan &s) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto &p : s.points) {
        points.push_back({{"delay_fs", p.delay_fs}, {"expected", p.expected}, {"sampled", p.sampled}});
    }
    return {{"visibility", s.visibility},
            {"plateau", s.plateau},
            {"minimum", s.minimum},
            {"width_fs", s.width_fs},
            {"points", std::move(points)}};
}

void write_hom_csv(std::ostream &out, const HomScan &s) {
    out << "delay_fs,expected,sampled\n";
    for (const auto &p : s.points) {
        out << format_number(p.delay_fs) << ',' << format_number(p.expected) << ',' << format_number(p.sampled)
            << '\n';
    }
}

nlohmann::json fringe_json(const FringeFit &fit) {
    return {{"A", fit.amplitude}, {"C", fit.contrast}, {"a0", fit.curve.a0}, {"a2", fit.curve.a2},
            {"a3", fit.curve.a3}, {"a4", fit.curve.a4}, {"rms", fit.rms},      {"iterations", fit.iterations}};
}

nlohmann::json with_schema(nlohmann::json body, const std::string &command) {
    nlohmann::json out = {{"schema", kReportSchema}, {"command", command}};
    for (auto &[key, value] : body.items()) {
        out[key] = value;
    }
    return out;
}

}  // namespace chipsim

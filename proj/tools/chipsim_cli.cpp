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

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chipsim/calibration.hpp"
#include "chipsim/chip.hpp"
#include "chipsim/csv.hpp"
#include "chipsim/experiments.hpp"
#include "chipsim/netlist_json.hpp"
#include "chipsim/reports.hpp"
#include "chipsim/tomography.hpp"
#include "json.hpp"
#include "json_config.hpp"

namespace {

using namespace chipsim;
using nlohmann::json;

constexpr int kExitInput = 1;
constexpr int kExitValidation = 2;

/// A result that ran to completion but failed its own check.
class ValidationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Common {
    uint64_t seed = 0;
    NoiseModel noise;
    int jobs = 1;
    int mc_trials = 20;
    std::string out;
    std::string format = "json";
    bool exact = false;

    CLI::Option *seed_opt = nullptr;
    CLI::Option *sigma_opt = nullptr;
    CLI::Option *visibility_opt = nullptr;
    CLI::Option *accidentals_opt = nullptr;

    /// Exact runs default to a noise-free device; explicit noise flags still apply.
    RunOptions run_options(bool needs_seed) const {
        if (needs_seed && !exact && seed_opt->count() == 0) {
            throw std::invalid_argument("--seed is required for sampled runs (or pass --exact)");
        }
        RunOptions o;
        o.noise = noise;
        o.seed = seed;
        o.exact = exact;
        o.jobs = jobs;
        o.mc_trials = mc_trials;
        if (exact) {
            if (sigma_opt->count() == 0) {
                o.noise.phase_sigma = 0.0;
            }
            if (visibility_opt->count() == 0) {
                o.noise.visibility = 1.0;
            }
            if (accidentals_opt->count() == 0) {
                o.noise.accidental_fraction = 0.0;
            }
        }
        o.noise.validate();
        return o;
    }
};

std::ifstream open_input(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    return in;
}

/// Writes the report to --out (printing `summary` on stdout) or to stdout.
void emit(const Common &c, const json &report, const json &summary,
          const std::function<void(std::ostream &)> &write_csv) {
    std::ostringstream body;
    if (c.format == "csv") {
        write_csv(body);
    } else {
        body << report.dump(2) << '\n';
    }
    if (c.out.empty()) {
        std::cout << body.str();
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file) {
        throw std::runtime_error(c.out + ": cannot write file");
    }
    file << body.str();
    json s = summary;
    s["out"] = c.out;
    std::cout << s.dump() << '\n';
}

json summary_of(const json &report, std::initializer_list<const char *> keys) {
    json s = {{"schema", report.at("schema")}, {"command", report.at("command")}};
    for (const char *k : keys) {
        if (report.contains(k)) {
            s[k] = report.at(k);
        }
    }
    return s;
}

std::vector<double> flatten(const ManifoldGrid &g) {
    std::vector<double> v;
    for (const auto &row : g.s) {
        v.insert(v.end(), row.begin(), row.end());
    }
    return v;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for a reconfigurable two-qubit photonic chip."};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<cli::JsonConfig>());
    app.set_config("--config", "", "JSON run configuration; command-line flags win");

    Common c;
    c.seed_opt = app.add_option("--seed", c.seed, "Master seed for every sampled quantity");
    c.sigma_opt = app.add_option("--phase-sigma", c.noise.phase_sigma, "Heater phase error std (rad)")
                      ->capture_default_str();
    c.visibility_opt = app.add_option("--visibility", c.noise.visibility, "Two-photon interference visibility")
                           ->capture_default_str();
    c.accidentals_opt = app.add_option("--accidentals", c.noise.accidental_fraction, "Accidental coincidence fraction")
                            ->capture_default_str();
    app.add_option("--pairs", c.noise.mean_pairs, "Mean detected pairs per setting")->capture_default_str();
    app.add_option("--jobs", c.jobs, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--mc-trials", c.mc_trials, "Poisson resamples per error bar")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    app.add_option("--out", c.out, "Output file (summary goes to stdout)");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_flag("--exact", c.exact, "Expectation values, no sampling, noise-free unless noise flags are given");

    std::function<void()> action;

    // benchmark-random
    int bench_n = 995;
    double bench_threshold = 0.97;
    auto *bench = app.add_subcommand("benchmark-random", "Statistical fidelity over random configurations");
    bench->add_option("--n", bench_n, "Number of configurations")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--threshold", bench_threshold, "Fidelity threshold for the reported fraction")
        ->capture_default_str();
    bench->callback([&] {
        action = [&] {
            const RunOptions o = c.run_options(true);
            const BenchmarkReport r = random_config_benchmark(bench_n, o);
            json body = benchmark_to_json(r, bench_threshold);
            body["run"] = run_to_json(o);
            const json report = with_schema(body, "benchmark-random");
            emit(c, report, summary_of(report, {"n", "mean", "std", "threshold", "fraction_above"}),
                 [&](std::ostream &os) { write_benchmark_csv(os, r); });
        };
    });

    // bell-suite
    std::string counts_out;
    auto *bell = app.add_subcommand("bell-suite", "Tomography of the four Bell states");
    bell->add_option("--counts-out", counts_out, "Write PREFIX_<state>.csv count records");
    bell->callback([&] {
        action = [&] {
            const RunOptions o = c.run_options(true);
            const SuiteReport r = bell_state_suite(o);
            if (!counts_out.empty()) {
                for (const auto &e : r.entries) {
                    const std::string path = counts_out + "_" + e.label + ".csv";
                    std::ofstream f(path, std::ios::binary);
                    if (!f) {
                        throw std::runtime_error(path + ": cannot write file");
                    }
                    write_count_records(f, e.records);
                }
            }
            json body = suite_to_json(r, 0.95);
            body["run"] = run_to_json(o);
            const json report = with_schema(body, "bell-suite");
            json summary = summary_of(report, {"mean_fidelity", "std_fidelity"});
            for (const auto &e : r.entries) {
                summary["fidelity"][e.label] = e.fidelity;
            }
            emit(c, report, summary, [&](std::ostream &os) { write_suite_csv(os, r); });
        };
    });

    // chsh-manifold
    double step = 2.0 * kPi / 15.0;
    auto *chsh = app.add_subcommand("chsh-manifold", "CHSH sum over the (alpha, beta) grid");
    chsh->add_option("--step", step, "Grid step (rad)")->check(CLI::PositiveNumber)->capture_default_str();
    chsh->callback([&] {
        action = [&] {
            const RunOptions o = c.run_options(true);
            const ManifoldGrid g = chsh_manifold(step, o);
            RunOptions ideal;
            ideal.exact = true;
            ideal.noise = NoiseModel::ideal();
            ideal.jobs = o.jobs;
            const ManifoldGrid theory = chsh_manifold(step, ideal);
            const Extremum hi = refine_chsh_extremum(theory, true);
            const Extremum lo = refine_chsh_extremum(theory, false);

            json body = manifold_to_json(g);
            const auto measured = flatten(g);
            const auto expected = flatten(theory);
            body["r_squared"] = r_squared(measured, expected);
            body["ideal_extrema"] = {{"max", {{"alpha", hi.alpha}, {"beta", hi.beta}, {"S", hi.s}}},
                                     {"min", {{"alpha", lo.alpha}, {"beta", lo.beta}, {"S", lo.s}}}};
            body["run"] = run_to_json(o);
            const json report = with_schema(body, "chsh-manifold");
            emit(c, report, summary_of(report, {"min", "max", "r_squared", "ideal_extrema"}),
                 [&](std::ostream &os) { write_manifold_csv(os, g); });
        };
    });

    // mixed-suite
    int mixed_n = 119;
    double mixed_threshold = 0.95;
    std::string targets_path;
    auto *mixed = app.add_subcommand("mixed-suite", "Single-qubit tomography of mixed states of qubit A");
    mixed->add_option("--n", mixed_n, "Number of Hilbert-Schmidt random targets")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mixed->add_option("--targets", targets_path, "CSV of target Bloch vectors (rx,ry,rz) instead of random ones");
    mixed->add_option("--threshold", mixed_threshold, "Fidelity threshold for the reported fraction")
        ->capture_default_str();
    mixed->callback([&] {
        action = [&] {
            const RunOptions o = c.run_options(true);
            std::vector<BlochVector> targets;
            if (!targets_path.empty()) {
                auto in = open_input(targets_path);
                targets = read_bloch_csv(in, targets_path);
            } else {
                targets = sample_hs_targets(mixed_n, o.seed);
            }
            const SuiteReport r = mixed_state_suite(targets, o);
            json body = suite_to_json(r, mixed_threshold);
            body["run"] = run_to_json(o);
            const json report = with_schema(body, "mixed-suite");
            emit(c, report, summary_of(report, {"mean_fidelity", "std_fidelity", "threshold", "fraction_above"}),
                 [&](std::ostream &os) { write_suite_csv(os, r); });
        };
    });

    // hom-dip
    double span_fs = 800.0;
    int hom_points = 81;
    SpectralModel spectrum;
    auto *hom = app.add_subcommand("hom-dip", "Two-photon coincidences versus delay");
    hom->add_option("--span", span_fs, "Scan from -span to +span (fs)")->check(CLI::PositiveNumber)->capture_default_str();
    hom->add_option("--points", hom_points, "Delays in the scan")->check(CLI::Range(5, 100000))->capture_default_str();
    hom->add_option("--center-nm", spectrum.center_nm, "Filter centre wavelength (nm)")->capture_default_str();
    hom->add_option("--fwhm-nm", spectrum.fwhm_nm, "Filter bandwidth (nm)")->capture_default_str();
    hom->callback([&] {
        action = [&] {
            const RunOptions o = c.run_options(true);
            std::vector<double> delays;
            for (int k = 0; k < hom_points; ++k) {
                delays.push_back(-span_fs + 2.0 * span_fs * k / (hom_points - 1));
            }
            const HomScan s = hom_scan(delays, spectrum, o);
            json body = hom_to_json(s);
            body["coherence_time_fs"] = coherence_time_fs(spectrum);
            body["run"] = run_to_json(o);
            const json report = with_schema(body, "hom-dip");
            emit(c, report, summary_of(report, {"visibility", "plateau", "minimum", "width_fs"}),
                 [&](std::ostream &os) { write_hom_csv(os, s); });
        };
    });

    // fringe-fit
    std::string fringe_input;
    int heater = 1;
    double contrast = 0.988;
    int fringe_points = 101;
    HeaterCurve curve{0.3, 0.12, 0.01, 0.001};
    auto *fringe = app.add_subcommand("fringe-fit", "Fit heater fringes from a file or a simulated scan");
    fringe->add_option("--input", fringe_input, "Fringe CSV (voltage,counts); omit to simulate a scan");
    fringe->add_option("--heater", heater, "Heater to scan (1-8)")->check(CLI::Range(1, 8))->capture_default_str();
    fringe->add_option("--contrast", contrast, "Fringe contrast of the simulated scan")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    fringe->add_option("--points", fringe_points, "Voltages in the simulated scan")
        ->check(CLI::Range(20, 100000))
        ->capture_default_str();
    fringe->add_option("--a0", curve.a0, "Simulated curve offset (rad)")->capture_default_str();
    fringe->add_option("--a2", curve.a2, "Simulated V^2 coefficient (rad/V^2)")->capture_default_str();
    fringe->add_option("--a3", curve.a3, "Simulated V^3 coefficient (rad/V^3)")->capture_default_str();
    fringe->add_option("--a4", curve.a4, "Simulated V^4 coefficient (rad/V^4)")->capture_default_str();
    fringe->callback([&] {
        action = [&] {
            std::vector<std::pair<std::string, std::vector<FringeSample>>> sets;
            json body;
            if (!fringe_input.empty()) {
                auto in = open_input(fringe_input);
                sets.emplace_back("input", read_fringe_csv(in, fringe_input));
                body["input"] = fringe_input;
            } else {
                const RunOptions o = c.run_options(true);
                std::vector<double> volts;
                for (int k = 0; k < fringe_points; ++k) {
                    volts.push_back(kMaxHeaterVolts * k / (fringe_points - 1));
                }
                const FringeScan scan = fringe_scan(heater, volts, curve, contrast, o);
                sets.emplace_back("output0", scan.output(0));
                sets.emplace_back("output1", scan.output(1));
                body["heater"] = heater;
                body["run"] = run_to_json(o);
            }
            json fits = json::object();
            std::vector<std::pair<std::string, FringeFit>> results;
            for (const auto &[name, samples] : sets) {
                const FringeFit f = fit_fringe(samples);
                fits[name] = fringe_json(f);
                results.emplace_back(name, f);
            }
            body["fits"] = fits;
            const json report = with_schema(body, "fringe-fit");
            emit(c, report, summary_of(report, {"fits"}), [&](std::ostream &os) {
                os << "source,A,C,a0,a2,a3,a4,rms\n";
                for (const auto &[name, f] : results) {
                    os << name << ',' << format_number(f.amplitude) << ',' << format_number(f.contrast) << ','
                       << format_number(f.curve.a0) << ',' << format_number(f.curve.a2) << ','
                       << format_number(f.curve.a3) << ',' << format_number(f.curve.a4) << ','
                       << format_number(f.rms) << '\n';
                }
            });
        };
    });

    // tomo
    std::string tomo_input;
    int qubits = 2;
    auto *tomo = app.add_subcommand("tomo", "Maximum-likelihood state reconstruction from count records");
    tomo->add_option("--input", tomo_input, "Count-record CSV (setting,n00,n01,n10,n11)")->required();
    tomo->add_option("--qubits", qubits, "1 (qubit A marginals) or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    tomo->callback([&] {
        action = [&] {
            auto in = open_input(tomo_input);
            const auto records = read_count_records(in, tomo_input, [&](const std::string &label) {
                if (setting_from_label(label).qubit_count() != qubits) {
                    throw std::invalid_argument("setting \"" + label + "\" does not match --qubits " +
                                                std::to_string(qubits));
                }
            });
            if (records.empty()) {
                throw InputError(tomo_input + ": no count records");
            }
            std::vector<MeasurementSetting> settings;
            for (const auto &r : records) {
                settings.push_back(setting_from_label(r.setting));
            }
            const MLEResult fit = mle_reconstruct(settings, records);
            json body = {{"input", tomo_input},
                         {"qubits", qubits},
                         {"rho", density_json(fit.rho)},
                         {"purity", fit.rho.purity()},
                         {"min_eigenvalue", fit.rho.min_eigenvalue()},
                         {"log_likelihood", fit.log_likelihood},
                         {"iterations", fit.iterations},
                         {"converged", fit.converged}};
            if (qubits == 1) {
                const BlochVector b = bloch_of_rho(fit.rho);
                body["bloch"] = {b.x, b.y, b.z};
            }
            const json report = with_schema(body, "tomo");
            emit(c, report, summary_of(report, {"purity", "converged", "bloch"}), [&](std::ostream &os) {
                os << "row,col,re,im\n";
                for (int r = 0; r < fit.rho.dim(); ++r) {
                    for (int k = 0; k < fit.rho.dim(); ++k) {
                        os << r << ',' << k << ',' << format_number(fit.rho(r, k).real()) << ','
                           << format_number(fit.rho(r, k).imag()) << '\n';
                    }
                }
            });
            if (!fit.converged) {
                throw ValidationFailure("maximum-likelihood fit did not converge");
            }
        };
    });

    // verify-chip
    std::string netlist_path;
    std::string export_path;
    double defect_threshold = 1e-9;
    auto *verify = app.add_subcommand("verify-chip", "Check that the waveguide netlist implements the CNOT");
    verify->add_option("--netlist", netlist_path, "Netlist JSON (default: built-in layout)");
    verify->add_option("--export-netlist", export_path, "Write the checked netlist as JSON");
    verify->add_option("--threshold", defect_threshold, "Largest acceptable defect")->capture_default_str();
    verify->callback([&] {
        action = [&] {
            Netlist layout = default_netlist();
            if (!netlist_path.empty()) {
                open_input(netlist_path);
                try {
                    layout = load_netlist(netlist_path);
                } catch (const std::invalid_argument &e) {
                    throw InputError(e.what());
                }
            }
            if (!export_path.empty()) {
                save_netlist(layout, export_path);
            }
            const CnotVerification v = check_cnot(layout);
            const bool ok = v.defect < defect_threshold;
            json body = {{"defect", v.defect},
                         {"threshold", defect_threshold},
                         {"success", v.success},
                         {"ok", ok}};
            if (!netlist_path.empty()) {
                body["netlist"] = netlist_path;
            }
            const json report = with_schema(body, "verify-chip");
            emit(c, report, summary_of(report, {"defect", "success", "ok"}), [&](std::ostream &os) {
                os << "defect,s00,s01,s10,s11\n"
                   << format_number(v.defect) << ',' << format_number(v.success[0]) << ','
                   << format_number(v.success[1]) << ',' << format_number(v.success[2]) << ','
                   << format_number(v.success[3]) << '\n';
            });
            if (!ok) {
                throw ValidationFailure("CNOT defect " + format_number(v.defect) + " exceeds threshold " +
                                        format_number(defect_threshold));
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        action();
    } catch (const ValidationFailure &e) {
        std::cerr << "chipsim: validation failed: " << e.what() << '\n';
        return kExitValidation;
    } catch (const FitError &e) {
        std::cerr << "chipsim: validation failed: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "chipsim: error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}

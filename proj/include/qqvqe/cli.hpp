// Copyright 2026 The qqvqe Authors
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

// Command-line front end. Exit codes: 0 success, 1 validation error (bad
// flags, inputs or files), 2 runtime error.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qqvqe/errors.hpp"
#include "qqvqe/hamiltonian.hpp"
#include "qqvqe/io.hpp"
#include "qqvqe/qem.hpp"
#include "qqvqe/vqe.hpp"

namespace qqvqe {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

namespace detail {

/// Comma-separated numbers; an empty string is an empty list.
inline std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for (std::string_view cell : split_commas(text)) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw ValidationError("cannot parse '" + std::string(cell) + "' in " + std::string(what));
        }
        out.push_back(v);
    }
    return out;
}

inline nlohmann::json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// {"p": [[p00, p01, p02, p03], ...]} with p[polarization][path].
inline PauliChannel channel_from_json(const nlohmann::json &j) {
    try {
        Real4x4 p{};
        const auto &rows = j.at("p");
        if (!rows.is_array() || rows.size() != 4) {
            throw ValidationError("channel 'p' must be a 4x4 array");
        }
        for (std::size_t a = 0; a < 4; a++) {
            if (!rows[a].is_array() || rows[a].size() != 4) {
                throw ValidationError("channel 'p' must be a 4x4 array");
            }
            for (std::size_t b = 0; b < 4; b++) {
                p[a][b] = rows[a][b].get<double>();
            }
        }
        return PauliChannel(p);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed channel JSON: ") + e.what());
    }
}

/// {"entries": [16 numbers, column-major]}, applied to every setting.
inline DetectorConfusion detector_from_json(const nlohmann::json &j) {
    try {
        const auto &entries = j.at("entries");
        if (!entries.is_array() || entries.size() != 16) {
            throw ValidationError("detector entries must be an array of 16 numbers");
        }
        Real4x4 m{};
        for (std::size_t c = 0; c < 4; c++) {
            for (std::size_t r = 0; r < 4; r++) {
                m[r][c] = entries.at(4 * c + r).get<double>();
            }
        }
        return DetectorConfusion(m);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("malformed detector JSON: ") + e.what());
    }
}

struct CliOptions {
    std::uint64_t seed = 0;
    std::int64_t shots = 4000;
    double lambda = 0;
    bool qem = false;
    std::optional<std::string> optimizer;
    std::optional<double> ftol;
    std::optional<int> max_evals;
    std::optional<double> initial_step;
    std::optional<double> final_step;
    std::optional<int> restarts;
    std::string table_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::string> mode;
    std::string gamma_source = "tomography";
    std::string gamma_file;
    std::string channel_file;
    std::string detector_file;
    std::int64_t tomography_shots = 10000;
};

inline HamiltonianTable load_table(const CliOptions &o) {
    HamiltonianTable table = builtin_table();
    if (!o.table_path.empty()) {
        table = merge_tables(std::move(table), load_table_csv(o.table_path));
    }
    return table;
}

inline VqeConfig build_config(const CliOptions &o, Mode default_mode, bool table_defaults) {
    VqeConfig c;
    c.mode = o.mode ? parse_mode(*o.mode) : default_mode;
    c.seed = o.seed;
    c.shots = o.shots;
    c.lambda = o.lambda;
    c.qem = o.qem;
    c.tomography_shots = o.tomography_shots;
    if (o.gamma_source == "analytic") {
        c.gamma_source = GammaSource::Analytic;
    } else if (o.gamma_source == "tomography") {
        c.gamma_source = GammaSource::Tomography;
    } else {
        throw ValidationError("gamma source must be 'analytic' or 'tomography'");
    }
    if (!o.channel_file.empty()) {
        c.channel = channel_from_json(read_json_file(o.channel_file));
    }
    if (!o.detector_file.empty()) {
        c.detectors.fill(detector_from_json(read_json_file(o.detector_file)));
    }
    if (!o.gamma_file.empty()) {
        c.gammas = gammas_from_json(read_json_file(o.gamma_file));
    }
    c.optimizer = table_defaults ? OptimizerConfig{} : optimizer_defaults(c.mode);
    if (o.optimizer) {
        c.optimizer.method = parse_method(*o.optimizer);
    }
    if (o.ftol) {
        c.optimizer.ftol = *o.ftol;
    }
    if (o.max_evals) {
        c.optimizer.max_evals = *o.max_evals;
    }
    if (o.initial_step) {
        c.optimizer.initial_step = *o.initial_step;
    }
    if (o.final_step) {
        c.optimizer.final_step = *o.final_step;
    }
    if (o.restarts) {
        c.optimizer.restarts = *o.restarts;
    }
    c.validate();
    return c;
}

inline void emit(const CliOptions &o, std::ostream &out, const std::string &text) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
        throw ValidationError("cannot write '" + o.out_path + "'");
    }
    file << text;
}

inline std::string dump(const nlohmann::json &j) {
    return j.dump(2) + "\n";
}

}  // namespace detail

/// Runs the CLI on `args` (without the program name).
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    detail::CliOptions o;
    CLI::App app{"Error-mitigated VQE simulator for He-H+ on a photonic ququart", "qqvqe"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--seed", o.seed, "Base random seed")->capture_default_str();
    app.add_option("--shots", o.shots, "Shots per measurement setting")->capture_default_str();
    app.add_option("--lambda", o.lambda, "Depolarizing strength on the polarization qubit")->capture_default_str();
    app.add_flag("--qem,!--no-qem", o.qem, "Enable error mitigation");
    app.add_option("--optimizer", o.optimizer, "nelder-mead, powell or cobyla");
    app.add_option("--ftol", o.ftol, "Optimizer tolerance");
    app.add_option("--max-evals", o.max_evals, "Evaluation budget per run");
    app.add_option("--initial-step", o.initial_step, "Initial simplex / direction / trust radius");
    app.add_option("--final-step", o.final_step, "COBYLA final trust radius and Nelder-Mead final simplex size");
    app.add_option("--restarts", o.restarts, "Restarts from the best point within the budget");
    app.add_option("--table", o.table_path, "Coefficient CSV merged over the built-in table")
        ->envname("QQVQE_TABLE");
    app.add_option("--out", o.out_path, "Write output to this file instead of stdout");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--mode", o.mode, "sampled or analytic")->check(CLI::IsMember({"sampled", "analytic"}));
    app.add_option("--gamma-source", o.gamma_source, "Gamma matrices: analytic or tomography")
        ->check(CLI::IsMember({"analytic", "tomography"}))
        ->capture_default_str();
    app.add_option("--gamma-file", o.gamma_file, "Gamma JSON from the tomography subcommand");
    app.add_option("--channel-file", o.channel_file, "Pauli channel JSON {\"p\": 4x4}; overrides --lambda");
    app.add_option("--detector-file", o.detector_file, "Detector confusion JSON {\"entries\": 16 column-major}");
    app.add_option("--tomography-shots", o.tomography_shots, "Shots per prepared eigenstate in tomography")
        ->capture_default_str();

    double run_r = 0.9;
    auto *run = app.add_subcommand("run", "One VQE run at a single distance");
    run->add_option("--r", run_r, "Interatomic distance in angstrom")->capture_default_str();

    std::optional<std::string> curve_r;
    auto *curve = app.add_subcommand("curve", "Dissociation curve over a list of distances");
    curve->add_option("--r", curve_r, "Comma-separated distances (default: every table row)");

    std::string sweep_lambdas = "0.1,0.2,0.4,0.8";
    double sweep_r = 0.9;
    int sweep_reps = 5;
    auto *sweep = app.add_subcommand("noise-sweep", "Mitigated and unmitigated runs over depolarizing strengths");
    sweep->add_option("--lambdas", sweep_lambdas, "Comma-separated lambda values")->capture_default_str();
    sweep->add_option("--r", sweep_r, "Interatomic distance in angstrom")->capture_default_str();
    sweep->add_option("--tomography-reps", sweep_reps, "Tomography repetitions behind lambda_std")
        ->capture_default_str();

    auto *tomo = app.add_subcommand("tomography", "Estimate the four Gamma matrices");

    int bench_trials = 1000;
    double bench_r = 0.9;
    std::string bench_trials_out;
    std::string bench_methods = "nelder-mead,powell,cobyla";
    auto *bench = app.add_subcommand("bench-optimizers", "Success probability and cost of each optimizer");
    bench->add_option("--trials", bench_trials, "Seeded runs per optimizer")->capture_default_str();
    bench->add_option("--r", bench_r, "Interatomic distance in angstrom")->capture_default_str();
    bench->add_option("--methods", bench_methods, "Comma-separated optimizers")->capture_default_str();
    bench->add_option("--trials-out", bench_trials_out, "Per-trial CSV for histograms");

    std::optional<double> oracle_r;
    auto *oracle = app.add_subcommand("oracle", "Exact ground-state energies of the table");
    oracle->add_option("--r", oracle_r, "Single distance (default: every table row)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    const bool json = o.format == "json";
    try {
        HamiltonianTable table = detail::load_table(o);
        std::ostringstream text;
        if (*run) {
            VqeConfig cfg = detail::build_config(o, Mode::Sampled, false);
            cfg.distance = run_r;
            VqeRunResult r = run_vqe(cfg, table);
            if (json) {
                text << detail::dump(run_to_json(r));
            } else {
                write_trace_csv(text, r);
            }
        } else if (*curve) {
            VqeConfig cfg = detail::build_config(o, Mode::Sampled, false);
            std::vector<double> rs;
            if (curve_r) {
                rs = detail::parse_number_list(*curve_r, "--r");
            } else {
                for (const auto &h : table) {
                    rs.push_back(h.distance());
                }
            }
            CurveResult c = dissociation_curve(cfg, rs, table);
            if (json) {
                text << detail::dump(curve_to_json(c, cfg));
            } else {
                write_curve_csv(text, c);
            }
        } else if (*sweep) {
            VqeConfig cfg = detail::build_config(o, Mode::Sampled, false);
            cfg.distance = sweep_r;
            SweepOptions so;
            so.tomography_repetitions = sweep_reps;
            SweepResult s = noise_sweep(detail::parse_number_list(sweep_lambdas, "--lambdas"), cfg, table, so);
            if (json) {
                text << detail::dump(sweep_to_json(s, cfg));
            } else {
                write_sweep_csv(text, s);
            }
        } else if (*tomo) {
            VqeConfig cfg = detail::build_config(o, Mode::Sampled, false);
            TomographyConfig tc;
            tc.shots_per_eigenstate = cfg.tomography_shots;
            tc.seed = cfg.seed;
            tc.analytic = cfg.mode == Mode::Analytic;
            GammaSet g = tomography_gammas(cfg.noise_channel(), cfg.detectors, tc);
            if (json) {
                text << detail::dump(gammas_to_json(g));
            } else {
                write_gammas_csv(text, g);
            }
        } else if (*bench) {
            VqeConfig cfg = detail::build_config(o, Mode::Analytic, true);
            cfg.distance = bench_r;
            std::vector<Method> methods;
            for (std::string_view m : detail::split_commas(bench_methods)) {
                methods.push_back(parse_method(m));
            }
            BenchResult b = optimizer_benchmark(bench_trials, cfg, table, methods);
            if (!bench_trials_out.empty()) {
                std::ofstream f(bench_trials_out, std::ios::binary);
                if (!f) {
                    throw ValidationError("cannot write '" + bench_trials_out + "'");
                }
                write_bench_trials_csv(f, b);
            }
            if (json) {
                text << detail::dump(bench_to_json(b, cfg));
            } else {
                write_bench_csv(text, b);
            }
        } else if (*oracle) {
            std::vector<const MolecularHamiltonian *> rows;
            if (oracle_r) {
                rows.push_back(&find_distance(table, *oracle_r));
            } else {
                for (const auto &h : table) {
                    rows.push_back(&h);
                }
            }
            const std::string note =
                "reference energy -2.863 MJ/mol at R = 0.9 A is not the minimum eigenvalue of the tabulated "
                "Hamiltonian; E0 here is exact diagonalization of the table";
            auto is_reference_row = [](const MolecularHamiltonian &h) { return std::abs(h.distance() - 0.9) < 1e-9; };
            bool has_reference = false;
            if (json) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto *h : rows) {
                    nlohmann::json row = {{"R", h->distance()}, {"E0", oracle_energy(*h)}};
                    if (is_reference_row(*h)) {
                        row["reference"] = kReferenceEnergyR09;
                        has_reference = true;
                    }
                    arr.push_back(row);
                }
                nlohmann::json doc = {{"unit", kEnergyUnit}, {"rows", arr}};
                if (has_reference) {
                    doc["note"] = note;
                }
                text << detail::dump(doc);
            } else {
                text << "R,E0,reference\n";
                for (const auto *h : rows) {
                    text << format_number(h->distance()) << ',' << format_number(oracle_energy(*h)) << ',';
                    if (is_reference_row(*h)) {
                        text << format_number(kReferenceEnergyR09);
                        has_reference = true;
                    }
                    text << '\n';
                }
                if (has_reference) {
                    err << "note: " << note << "\n";
                }
            }
        }
        detail::emit(o, out, text.str());
        return kExitOk;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

inline int run_cli(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, out, err);
}

}  // namespace qqvqe

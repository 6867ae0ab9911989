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

// CSV and JSON writers for run, curve, sweep, benchmark and oracle results.
// Numbers are printed with fixed printf formats so output is byte-stable.

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qqvqe/hamiltonian.hpp"
#include "qqvqe/qem.hpp"
#include "qqvqe/vqe.hpp"

namespace qqvqe {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline const char *format_bool(bool b) {
    return b ? "true" : "false";
}

inline nlohmann::json channel_to_json(const PauliChannel &ch) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : ch.probs()) {
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json optimizer_to_json(const OptimizerConfig &c) {
    return {
        {"method", method_name(c.method)}, {"ftol", c.ftol},           {"max_evals", c.max_evals},
        {"initial_step", c.initial_step},  {"final_step", c.final_step}, {"restarts", c.restarts},
    };
}

inline nlohmann::json config_to_json(const VqeConfig &c) {
    nlohmann::json detectors = nlohmann::json::array();
    for (const auto &d : c.detectors) {
        detectors.push_back(d.matrix());
    }
    return {
        {"distance", c.distance},
        {"shots", c.shots},
        {"lambda", c.lambda},
        {"channel", channel_to_json(c.noise_channel())},
        {"detectors", detectors},
        {"qem", c.qem},
        {"gamma_source", c.gammas ? std::string("file") : std::string(gamma_source_name(c.gamma_source))},
        {"tomography_shots", c.tomography_shots},
        {"optimizer", optimizer_to_json(c.optimizer)},
        {"seed", c.seed},
        {"mode", mode_name(c.mode)},
    };
}

inline nlohmann::json run_to_json(const VqeRunResult &r) {
    nlohmann::json trace = nlohmann::json::array();
    for (std::size_t i = 0; i < r.trace.size(); i++) {
        trace.push_back({{"eval", i + 1}, {"energy", r.trace[i].value}, {"theta", r.trace[i].theta}});
    }
    return {
        {"config", config_to_json(r.config)},
        {"trace", trace},
        {"gammas", r.gammas ? gammas_to_json(*r.gammas).at("gammas") : nlohmann::json(nullptr)},
        {"result",
         {
             {"final_energy", r.final_energy},
             {"final_std", r.final_std},
             {"best_value", r.best_value},
             {"best_theta", r.best_theta},
             {"n_evals", r.n_evals},
             {"converged", r.converged},
             {"total_shots", r.total_shots()},
             {"oracle_e0", r.oracle_e0},
             {"success", r.success},
             {"unit", kEnergyUnit},
         }},
    };
}

/// One line per evaluation: eval,energy,H1,Q1,H2,Q2,H3,Q3.
inline void write_trace_csv(std::ostream &out, const VqeRunResult &r) {
    out << "eval,energy,H1,Q1,H2,Q2,H3,Q3\n";
    for (std::size_t i = 0; i < r.trace.size(); i++) {
        out << i + 1 << ',' << format_number(r.trace[i].value);
        for (double t : r.trace[i].theta) {
            out << ',' << format_number(t);
        }
        out << '\n';
    }
}

inline void write_curve_csv(std::ostream &out, const CurveResult &c) {
    out << "R,energy,std,oracle,success\n";
    for (const auto &row : c.rows) {
        out << format_number(row.distance) << ',' << format_number(row.energy) << ',' << format_number(row.stddev)
            << ',' << format_number(row.oracle) << ',' << format_bool(row.success) << '\n';
    }
}

inline nlohmann::json curve_to_json(const CurveResult &c, const VqeConfig &cfg) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : c.rows) {
        rows.push_back({{"R", row.distance},
                        {"energy", row.energy},
                        {"std", row.stddev},
                        {"oracle", row.oracle},
                        {"success", row.success},
                        {"n_evals", row.n_evals}});
    }
    return {{"config", config_to_json(cfg)}, {"rows", rows}};
}

inline void write_sweep_csv(std::ostream &out, const SweepResult &s) {
    out << "lambda,lambda_std,E_unmitigated,E_mitigated,E_expected_noisy,oracle\n";
    for (const auto &row : s.rows) {
        out << format_number(row.lambda) << ',' << format_number(row.lambda_std) << ','
            << format_number(row.e_unmitigated) << ',' << format_number(row.e_mitigated) << ','
            << format_number(row.e_expected_noisy) << ',' << format_number(row.oracle) << '\n';
    }
}

inline nlohmann::json sweep_to_json(const SweepResult &s, const VqeConfig &cfg) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : s.rows) {
        rows.push_back({{"lambda", row.lambda},
                        {"lambda_std", row.lambda_std},
                        {"E_unmitigated", row.e_unmitigated},
                        {"E_mitigated", row.e_mitigated},
                        {"E_expected_noisy", row.e_expected_noisy},
                        {"oracle", row.oracle}});
    }
    return {{"config", config_to_json(cfg)}, {"rows", rows}};
}

inline void write_bench_csv(std::ostream &out, const BenchResult &b) {
    out << "optimizer,P_S,mean_evals,median_evals\n";
    for (const auto &row : b.rows) {
        out << method_name(row.method) << ',' << format_number(row.success_probability) << ','
            << format_number(row.mean_evals) << ',' << format_number(row.median_evals) << '\n';
    }
}

/// Per-trial rows for histograms of final energies and evaluation counts.
inline void write_bench_trials_csv(std::ostream &out, const BenchResult &b) {
    out << "optimizer,trial,best_value,final_energy,n_evals,success\n";
    for (const auto &t : b.trials) {
        out << method_name(t.method) << ',' << t.trial << ',' << format_number(t.best_value) << ','
            << format_number(t.final_energy) << ',' << t.n_evals << ',' << format_bool(t.success) << '\n';
    }
}

inline nlohmann::json bench_to_json(const BenchResult &b, const VqeConfig &cfg) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : b.rows) {
        rows.push_back({{"optimizer", method_name(row.method)},
                        {"P_S", row.success_probability},
                        {"mean_evals", row.mean_evals},
                        {"median_evals", row.median_evals}});
    }
    nlohmann::json trials = nlohmann::json::array();
    for (const auto &t : b.trials) {
        trials.push_back({{"optimizer", method_name(t.method)},
                          {"trial", t.trial},
                          {"best_value", t.best_value},
                          {"final_energy", t.final_energy},
                          {"n_evals", t.n_evals},
                          {"success", t.success}});
    }
    return {{"config", config_to_json(cfg)}, {"rows", rows}, {"trials", trials}};
}

/// Gamma entries as CSV: setting,outcome,prepared,probability.
inline void write_gammas_csv(std::ostream &out, const GammaSet &gammas) {
    out << "setting,outcome,prepared,probability\n";
    for (const auto &g : gammas) {
        for (std::size_t k = 0; k < 4; k++) {
            for (std::size_t l = 0; l < 4; l++) {
                out << g.setting().str() << ',' << l << ',' << k << ',' << format_number(g(l, k)) << '\n';
            }
        }
    }
}

}  // namespace qqvqe

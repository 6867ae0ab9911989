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

// The VQE loop end to end and the experiments built on it.
//
// One objective evaluation (one QPU call) prepares the ququart, applies the
// Pauli channel, measures all four settings (shots each, or exact
// probabilities in analytic mode), optionally mitigates each outcome
// distribution, estimates the Pauli expectations and combines them into
// <H>.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qqvqe/ansatz.hpp"
#include "qqvqe/errors.hpp"
#include "qqvqe/hamiltonian.hpp"
#include "qqvqe/optim.hpp"
#include "qqvqe/qem.hpp"
#include "qqvqe/qpu.hpp"
#include "qqvqe/random.hpp"

namespace qqvqe {

/// Success threshold on |E - E0|, in MJ/mol.
inline constexpr double kSuccessTolerance = 0.01;

/// Number of lowest trace energies averaged into the reported estimate.
inline constexpr std::size_t kFiveMinimum = 5;

enum class Mode { Sampled, Analytic };

enum class GammaSource { Analytic, Tomography };

inline std::string_view mode_name(Mode m) {
    return m == Mode::Sampled ? "sampled" : "analytic";
}

inline Mode parse_mode(std::string_view s) {
    if (s == "sampled") {
        return Mode::Sampled;
    }
    if (s == "analytic") {
        return Mode::Analytic;
    }
    throw ValidationError("mode must be 'sampled' or 'analytic'");
}

inline std::string_view gamma_source_name(GammaSource g) {
    return g == GammaSource::Analytic ? "analytic" : "tomography";
}

/// Optimizer settings for sampled runs: COBYLA from a wide trust radius
/// down to a final radius above the shot-noise floor, restarted from the
/// best point until the budget is spent.
inline OptimizerConfig sampled_optimizer_defaults() {
    OptimizerConfig c;
    c.initial_step = 1.0;
    c.final_step = 0.03;
    c.restarts = 1000;
    return c;
}

/// Optimizer settings for exact-expectation runs: COBYLA and Nelder-Mead
/// converged to a step size far below ftol.
inline OptimizerConfig analytic_optimizer_defaults() {
    OptimizerConfig c;
    c.final_step = 1e-4;
    c.max_evals = 1000;
    return c;
}

inline OptimizerConfig optimizer_defaults(Mode m) {
    return m == Mode::Sampled ? sampled_optimizer_defaults() : analytic_optimizer_defaults();
}

struct VqeConfig {
    double distance = 0.9;
    std::int64_t shots = 4000;
    /// Depolarizing strength on the polarization qubit; ignored when
    /// `channel` is set.
    double lambda = 0;
    std::optional<PauliChannel> channel;
    std::array<DetectorConfusion, 4> detectors{};
    bool qem = false;
    GammaSource gamma_source = GammaSource::Tomography;
    std::int64_t tomography_shots = 10000;
    /// Pre-computed Gamma matrices (e.g. from a tomography file); take
    /// precedence over gamma_source.
    std::optional<GammaSet> gammas;
    OptimizerConfig optimizer{};
    std::uint64_t seed = 0;
    Mode mode = Mode::Sampled;

    PauliChannel noise_channel() const {
        return channel ? *channel : depolarizing_polarization(lambda);
    }

    void validate() const {
        if (shots < 1) {
            throw ValidationError("shots must be at least 1");
        }
        if (tomography_shots < 1) {
            throw ValidationError("tomography shots must be at least 1");
        }
        if (!channel && !(lambda >= 0 && lambda <= 1)) {
            throw OutOfRange("lambda must lie in [0, 1]");
        }
        optimizer.validate();
    }
};

/// Gamma matrices for the configured noise: file-provided, exact, or
/// estimated by tomography with a seed derived from cfg.seed.
inline GammaSet prepare_gammas(const VqeConfig &cfg) {
    if (cfg.gammas) {
        return *cfg.gammas;
    }
    if (cfg.gamma_source == GammaSource::Analytic) {
        return analytic_gammas(cfg.noise_channel(), cfg.detectors);
    }
    TomographyConfig tc;
    tc.shots_per_eigenstate = cfg.tomography_shots;
    tc.seed = derive_seed(cfg.seed, {0x67616D6D61ULL});
    return tomography_gammas(cfg.noise_channel(), cfg.detectors, tc);
}

/// <H> estimate at theta. `sample_seed` drives the shot noise of this call
/// (ignored in analytic mode); `gammas` is required when cfg.qem is set.
inline double energy_objective(std::span<const double, kNumAngles> theta, const VqeConfig &cfg,
                               const MolecularHamiltonian &h, const GammaSet *gammas, std::uint64_t sample_seed,
                               const PauliChannel &channel) {
    if (cfg.qem && gammas == nullptr) {
        throw ValidationError("error mitigation needs Gamma matrices");
    }
    const auto &settings = standard_settings();
    const auto groups = measurement_groups(h);
    DensityMatrix4 rho = apply_channel(DensityMatrix4::from_ket(prepare_ququart(theta)), channel);
    PauliEstimates estimates;
    for (std::size_t s = 0; s < 4; s++) {
        ProbVector q = apply_detector(cfg.detectors[s], ideal_probs(rho, settings[s]));
        if (cfg.mode == Mode::Sampled) {
            q = sample_outcomes(q, cfg.shots, derive_seed(sample_seed, {s})).frequencies();
        }
        if (cfg.qem) {
            q = mitigate((*gammas)[s], q);
        }
        PauliEstimates measured = estimate_paulis(q, settings[s]);
        for (PauliString p : groups[s].strings) {
            auto it = measured.find(p);
            if (it != measured.end()) {
                estimates[p] = it->second;
            }
        }
    }
    return combine_expectations(h, estimates);
}

inline double energy_objective(std::span<const double, kNumAngles> theta, const VqeConfig &cfg,
                               const MolecularHamiltonian &h, const GammaSet *gammas = nullptr,
                               std::uint64_t sample_seed = 0) {
    return energy_objective(theta, cfg, h, gammas, sample_seed, cfg.noise_channel());
}

/// Objective bound to one run: each call draws fresh shots from a stream
/// keyed by (seed, call index).
class VqeObjective {
   public:
    VqeObjective(const VqeConfig &cfg, const MolecularHamiltonian &h, std::optional<GammaSet> gammas)
        : cfg_(cfg), h_(h), gammas_(std::move(gammas)), channel_(cfg.noise_channel()) {
    }

    double operator()(std::span<const double> theta) {
        if (theta.size() != kNumAngles) {
            throw ValidationError("objective expects six waveplate angles");
        }
        std::uint64_t seed = derive_seed(cfg_.seed, {0x73686F7473ULL, calls_++});
        return energy_objective(std::span<const double, kNumAngles>(theta.data(), kNumAngles), cfg_, h_,
                                gammas_ ? &*gammas_ : nullptr, seed, channel_);
    }

    std::uint64_t calls() const {
        return calls_;
    }

   private:
    const VqeConfig &cfg_;
    const MolecularHamiltonian &h_;
    std::optional<GammaSet> gammas_;
    PauliChannel channel_;
    std::uint64_t calls_ = 0;
};

struct FiveMinimum {
    double mean = 0;
    double stddev = 0;
};

/// Mean and sample standard deviation of the five smallest values (fewer
/// when the trace is shorter).
inline FiveMinimum five_minimum(std::vector<double> values) {
    if (values.empty()) {
        return {std::nan(""), std::nan("")};
    }
    std::size_t k = std::min(kFiveMinimum, values.size());
    std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    double mean = 0;
    for (std::size_t i = 0; i < k; i++) {
        mean += values[i];
    }
    mean /= static_cast<double>(k);
    double var = 0;
    for (std::size_t i = 0; i < k; i++) {
        var += (values[i] - mean) * (values[i] - mean);
    }
    double sd = k > 1 ? std::sqrt(var / static_cast<double>(k - 1)) : 0.0;
    return {mean, sd};
}

struct VqeRunResult {
    VqeConfig config;
    std::vector<TracePoint> trace;
    double best_value = 0;
    std::vector<double> best_theta;
    int n_evals = 0;
    bool converged = false;
    double final_energy = 0;
    double final_std = 0;
    double oracle_e0 = 0;
    bool success = false;
    std::optional<GammaSet> gammas;

    /// Shots spent: evaluations x four settings x shots (0 in analytic mode).
    std::int64_t total_shots() const {
        return config.mode == Mode::Sampled ? static_cast<std::int64_t>(n_evals) * 4 * config.shots : 0;
    }
};

inline VqeRunResult run_vqe(const VqeConfig &cfg, const HamiltonianTable &table) {
    cfg.validate();
    const MolecularHamiltonian &h = find_distance(table, cfg.distance);
    std::optional<GammaSet> gammas;
    if (cfg.qem) {
        gammas = prepare_gammas(cfg);
    }
    VqeObjective objective(cfg, h, gammas);
    WaveplateAngles theta0 = random_angles(cfg.seed);
    OptResult opt = minimize(objective, std::span<const double>(theta0), cfg.optimizer);

    VqeRunResult r;
    r.config = cfg;
    r.gammas = gammas;
    r.oracle_e0 = oracle_energy(h);
    r.best_value = opt.best_value;
    r.best_theta = opt.best_theta;
    r.n_evals = opt.n_evals;
    r.converged = opt.converged;
    r.success = is_success(opt, r.oracle_e0, kSuccessTolerance);
    std::vector<double> energies;
    energies.reserve(opt.trace.size());
    for (const auto &t : opt.trace) {
        energies.push_back(t.value);
    }
    FiveMinimum fm = five_minimum(energies);
    r.final_energy = fm.mean;
    r.final_std = fm.stddev;
    r.trace = std::move(opt.trace);
    return r;
}

struct CurveRow {
    double distance = 0;
    double energy = 0;
    double stddev = 0;
    double oracle = 0;
    bool success = false;
    int n_evals = 0;
};

struct CurveResult {
    std::vector<CurveRow> rows;
};

/// One run per distance; row i uses seed cfg.seed + i.
inline CurveResult dissociation_curve(const VqeConfig &cfg, std::vector<double> distances,
                                      const HamiltonianTable &table) {
    for (double r : distances) {
        find_distance(table, r);
    }
    std::sort(distances.begin(), distances.end());
    CurveResult out;
    for (std::size_t i = 0; i < distances.size(); i++) {
        VqeConfig c = cfg;
        c.distance = distances[i];
        c.seed = cfg.seed + i;
        VqeRunResult r = run_vqe(c, table);
        out.rows.push_back({distances[i], r.final_energy, r.final_std, r.oracle_e0, r.success, r.n_evals});
    }
    return out;
}

/// Lowest value of the exact (infinite-shot, unmitigated) noisy objective
/// over all waveplate settings, by multi-start Powell with a tight tolerance.
inline double expected_noisy_minimum(const VqeConfig &cfg, const MolecularHamiltonian &h, int starts = 6) {
    VqeConfig exact = cfg;
    exact.mode = Mode::Analytic;
    exact.qem = false;
    exact.gammas.reset();
    PauliChannel channel = exact.noise_channel();
    auto f = [&](std::span<const double> theta) {
        return energy_objective(std::span<const double, kNumAngles>(theta.data(), kNumAngles), exact, h, nullptr, 0,
                                channel);
    };
    OptimizerConfig oc;
    oc.method = Method::Powell;
    oc.ftol = 1e-10;
    oc.initial_step = 0.5;
    oc.max_evals = 4000;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts; s++) {
        WaveplateAngles theta0 = random_angles(derive_seed(cfg.seed, {0x6E65737465ULL, static_cast<std::uint64_t>(s)}));
        best = std::min(best, minimize(f, std::span<const double>(theta0), oc).best_value);
    }
    return best;
}

/// Depolarizing strength implied by a Gamma set, assuming the noise is
/// polarization depolarizing with an ideal detector: the polarization bit of
/// the outcome flips with probability lambda / 2 in every setting.
inline double estimate_depolarizing_lambda(const GammaSet &gammas) {
    double flips = 0;
    for (const auto &g : gammas) {
        for (std::size_t k = 0; k < 4; k++) {
            flips += g(k ^ 1, k);
        }
    }
    return 2 * flips / 16;
}

struct SweepRow {
    double lambda = 0;
    double lambda_std = 0;
    double e_unmitigated = 0;
    double e_mitigated = 0;
    double e_expected_noisy = 0;
    double oracle = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct SweepOptions {
    /// Independent tomography repetitions behind lambda_std.
    int tomography_repetitions = 5;
};

/// Paired unmitigated / mitigated runs per lambda at cfg.distance.
inline SweepResult noise_sweep(std::vector<double> lambdas, const VqeConfig &cfg, const HamiltonianTable &table,
                               const SweepOptions &opts = {}) {
    for (double l : lambdas) {
        if (!(l >= 0 && l < 1)) {
            throw OutOfRange("noise sweep needs lambda in [0, 1); lambda = 1 makes Gamma singular");
        }
    }
    if (opts.tomography_repetitions < 1) {
        throw ValidationError("tomography repetitions must be at least 1");
    }
    std::sort(lambdas.begin(), lambdas.end());
    const MolecularHamiltonian &h = find_distance(table, cfg.distance);
    SweepResult out;
    for (std::size_t i = 0; i < lambdas.size(); i++) {
        VqeConfig c = cfg;
        c.channel.reset();
        c.gammas.reset();
        c.lambda = lambdas[i];
        c.seed = cfg.seed + i;

        SweepRow row;
        row.lambda = lambdas[i];
        row.oracle = oracle_energy(h);

        std::vector<double> estimates;
        for (int rep = 0; rep < opts.tomography_repetitions; rep++) {
            TomographyConfig tc;
            tc.shots_per_eigenstate = c.tomography_shots;
            tc.seed = derive_seed(c.seed, {0x7377656570ULL, static_cast<std::uint64_t>(rep)});
            estimates.push_back(estimate_depolarizing_lambda(tomography_gammas(c.noise_channel(), c.detectors, tc)));
        }
        double mean = 0;
        for (double e : estimates) {
            mean += e;
        }
        mean /= static_cast<double>(estimates.size());
        double var = 0;
        for (double e : estimates) {
            var += (e - mean) * (e - mean);
        }
        row.lambda_std = estimates.size() > 1 ? std::sqrt(var / static_cast<double>(estimates.size() - 1)) : 0.0;

        c.qem = false;
        row.e_unmitigated = run_vqe(c, table).final_energy;
        c.qem = true;
        row.e_mitigated = run_vqe(c, table).final_energy;
        row.e_expected_noisy = expected_noisy_minimum(c, h);
        out.rows.push_back(row);
    }
    return out;
}

struct BenchTrial {
    Method method = Method::Cobyla;
    int trial = 0;
    double best_value = 0;
    double final_energy = 0;
    int n_evals = 0;
    bool success = false;
};

struct BenchRow {
    Method method = Method::Cobyla;
    double success_probability = 0;
    double mean_evals = 0;
    double median_evals = 0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<BenchTrial> trials;
};

/// Evaluation cap used for the Nelder-Mead row, whose stalled runs can wander
/// for thousands of evaluations.
inline constexpr int kNelderMeadBenchCap = 5000;

/// `trials` seeded runs per optimizer (trial i uses seed cfg.seed + i).
inline BenchResult optimizer_benchmark(int trials, const VqeConfig &cfg, const HamiltonianTable &table,
                                       std::vector<Method> methods = {Method::NelderMead, Method::Powell,
                                                                      Method::Cobyla}) {
    if (trials < 1) {
        throw ValidationError("benchmark needs at least one trial");
    }
    BenchResult out;
    for (Method m : methods) {
        VqeConfig c = cfg;
        c.optimizer.method = m;
        if (m == Method::NelderMead) {
            c.optimizer.max_evals = std::max(c.optimizer.max_evals, kNelderMeadBenchCap);
        }
        std::vector<double> evals;
        int successes = 0;
        for (int t = 0; t < trials; t++) {
            c.seed = cfg.seed + static_cast<std::uint64_t>(t);
            VqeRunResult r = run_vqe(c, table);
            out.trials.push_back({m, t, r.best_value, r.final_energy, r.n_evals, r.success});
            evals.push_back(r.n_evals);
            successes += r.success ? 1 : 0;
        }
        BenchRow row;
        row.method = m;
        row.success_probability = static_cast<double>(successes) / trials;
        double sum = 0;
        for (double e : evals) {
            sum += e;
        }
        row.mean_evals = sum / trials;
        std::sort(evals.begin(), evals.end());
        std::size_t mid = evals.size() / 2;
        row.median_evals = evals.size() % 2 == 1 ? evals[mid] : 0.5 * (evals[mid - 1] + evals[mid]);
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace qqvqe

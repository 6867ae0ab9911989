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


// Invariant suites across modules. Run alone with `ctest -L property` or
// by executing qqvqe_properties.

#include <gtest/gtest.h>

#include <random>

#include "qqvqe/vqe.hpp"
#include "test_util.hpp"

namespace qqvqe {
namespace {

TEST(StateNormalization, PreparedKetsHaveUnitNorm) {
    for (std::uint64_t s = 0; s < 10000; s++) {
        ASSERT_NEAR(norm(prepare_ququart(random_angles(s))), 1.0, 1e-10) << s;
    }
}

TEST(StateNormalization, ArbitraryAnglesHaveUnitNorm) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 10000; i++) {
        WaveplateAngles t{u(g), u(g), u(g), u(g), u(g), u(g)};
        ASSERT_NEAR(norm(prepare_ququart(t)), 1.0, 1e-10);
    }
}

TEST(ChannelPreservation, TraceHermiticityPositivity) {
    std::mt19937_64 g(2);
    for (int i = 0; i < 1000; i++) {
        auto rho = testing::random_density(g);
        auto ch = testing::random_channel(g, (i % 4) * 0.25);
        Operator4 out = apply_channel(rho, ch).matrix();
        ASSERT_NEAR(out.trace().real(), 1.0, 1e-10);
        ASSERT_NEAR(out.trace().imag(), 0.0, 1e-10);
        ASSERT_TRUE(out.is_hermitian(1e-12));
        ASSERT_GE(min_eigenvalue(out), -1e-8);
        // Re-validating through the checked constructor must succeed.
        ASSERT_NO_THROW(DensityMatrix4{out});
    }
}

TEST(ChannelPreservation, DepolarizingFamily) {
    std::mt19937_64 g(3);
    for (int i = 0; i <= 100; i++) {
        double lambda = i / 100.0;
        auto out = apply_channel(testing::random_density(g), depolarizing_polarization(lambda)).matrix();
        ASSERT_NEAR(out.trace().real(), 1.0, 1e-10);
        ASSERT_GE(min_eigenvalue(out), -1e-8);
    }
}

TEST(GammaLeftStochastic, AnalyticAndTomography) {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(0.01, 1);
    for (int i = 0; i < 200; i++) {
        auto ch = testing::random_channel(g, (i % 3) * 0.3);
        Real4x4 lam{};
        for (std::size_t c = 0; c < 4; c++) {
            double s = 0;
            for (std::size_t r = 0; r < 4; r++) {
                lam[r][c] = u(g);
                s += lam[r][c];
            }
            for (std::size_t r = 0; r < 4; r++) {
                lam[r][c] /= s;
            }
        }
        std::array<DetectorConfusion, 4> detectors;
        detectors.fill(DetectorConfusion(lam));
        TomographyConfig cfg;
        cfg.shots_per_eigenstate = 1 + static_cast<std::int64_t>(g() % 2000);
        cfg.seed = g();
        for (const auto &gammas : {analytic_gammas(ch, detectors), tomography_gammas(ch, detectors, cfg)}) {
            for (const auto &gm : gammas) {
                for (std::size_t k = 0; k < 4; k++) {
                    double col = 0;
                    for (std::size_t l = 0; l < 4; l++) {
                        ASSERT_GE(gm(l, k), 0.0);
                        ASSERT_LE(gm(l, k), 1.0);
                        col += gm(l, k);
                    }
                    ASSERT_NEAR(col, 1.0, 1e-9);
                }
            }
        }
    }
}

TEST(DeltaDoublyStochastic, RandomPauliChannels) {
    std::mt19937_64 g(5);
    for (int i = 0; i < 1000; i++) {
        auto ch = testing::random_channel(g, (i % 5) * 0.2);
        for (const auto &s : standard_settings()) {
            Real4x4 d = channel_transition_matrix(ch, s);
            for (std::size_t a = 0; a < 4; a++) {
                double row = 0, col = 0;
                for (std::size_t b = 0; b < 4; b++) {
                    ASSERT_GE(d[a][b], -1e-12);
                    row += d[a][b];
                    col += d[b][a];
                }
                ASSERT_NEAR(row, 1.0, 1e-10);
                ASSERT_NEAR(col, 1.0, 1e-10);
            }
        }
    }
}

double dist2(const Real4 &a, const Real4 &b) {
    double s = 0;
    for (std::size_t i = 0; i < 4; i++) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return s;
}

TEST(SimplexProjection, NearestPointOnSimplex) {
    std::mt19937_64 g(6);
    std::normal_distribution<double> n(0.25, 1.0);
    std::exponential_distribution<double> e(1.0);
    std::vector<Real4> candidates(1000);
    for (auto &q : candidates) {
        double s = 0;
        for (double &x : q) {
            x = e(g);
            s += x;
        }
        for (double &x : q) {
            x /= s;
        }
    }
    for (int i = 0; i < 1000; i++) {
        Real4 v{n(g), n(g), n(g), n(g)};
        ProbVector p = project_simplex(v);
        ASSERT_TRUE(p.is_valid(1e-12));
        double best = std::sqrt(dist2(p.p, v));
        for (const auto &q : candidates) {
            ASSERT_LE(best, std::sqrt(dist2(q, v)) + 1e-10);
        }
    }
}

TEST(SimplexProjection, FixesPointsOnSimplex) {
    std::mt19937_64 g(7);
    std::exponential_distribution<double> e(1.0);
    for (int i = 0; i < 1000; i++) {
        Real4 q{};
        double s = 0;
        for (double &x : q) {
            x = e(g);
            s += x;
        }
        for (double &x : q) {
            x /= s;
        }
        ASSERT_LT(testing::max_abs(project_simplex(q).p, q), 1e-15);
    }
}

TEST(FiveMinimum, MeanAndSampleDeviationOfFiveSmallest) {
    std::mt19937_64 g(8);
    std::normal_distribution<double> n(-5, 0.3);
    for (int i = 0; i < 1000; i++) {
        std::vector<double> values(5 + g() % 300);
        for (double &v : values) {
            v = n(g);
        }
        FiveMinimum fm = five_minimum(values);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        double mean = 0;
        for (int k = 0; k < 5; k++) {
            mean += sorted[static_cast<std::size_t>(k)];
        }
        mean /= 5;
        double var = 0;
        for (int k = 0; k < 5; k++) {
            var += (sorted[static_cast<std::size_t>(k)] - mean) * (sorted[static_cast<std::size_t>(k)] - mean);
        }
        ASSERT_NEAR(fm.mean, mean, 1e-12);
        ASSERT_NEAR(fm.stddev, std::sqrt(var / 4), 1e-12);
        ASSERT_GE(fm.mean, sorted.front());
        ASSERT_LE(fm.mean, sorted[4]);
        // Order of the trace does not matter.
        std::shuffle(values.begin(), values.end(), g);
        ASSERT_EQ(five_minimum(values).mean, fm.mean);
    }
}

TEST(FiveMinimum, RunResultsUseTheirOwnTrace) {
    const auto table = builtin_table();
    VqeConfig cfg;
    cfg.optimizer = sampled_optimizer_defaults();
    cfg.optimizer.max_evals = 60;
    for (std::uint64_t s = 0; s < 10; s++) {
        cfg.seed = s;
        VqeRunResult r = run_vqe(cfg, table);
        std::vector<double> values;
        for (const auto &t : r.trace) {
            values.push_back(t.value);
        }
        FiveMinimum fm = five_minimum(values);
        ASSERT_EQ(r.final_energy, fm.mean);
        ASSERT_EQ(r.final_std, fm.stddev);
        ASSERT_GE(r.final_energy, r.best_value);
    }
}

}  // namespace
}  // namespace qqvqe

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


#include <gtest/gtest.h>

#include "qqvqe/optim.hpp"
#include "qqvqe/vqe.hpp"

namespace qqvqe {
namespace {

constexpr Method kMethods[] = {Method::NelderMead, Method::Powell, Method::Cobyla};

double shifted_quadratic(std::span<const double> x) {
    double s = 0;
    for (double v : x) {
        s += (v - 1) * (v - 1);
    }
    return s;
}

OptimizerConfig tight(Method m) {
    OptimizerConfig c;
    c.method = m;
    c.ftol = 1e-12;
    c.max_evals = 5000;
    c.final_step = 1e-8;
    return c;
}

class EachMethod : public ::testing::TestWithParam<Method> {};

std::string test_name(const ::testing::TestParamInfo<Method> &info) {
    constexpr const char *names[] = {"NelderMead", "Powell", "Cobyla"};
    return names[static_cast<int>(info.param)];
}

INSTANTIATE_TEST_SUITE_P(Optim, EachMethod, ::testing::ValuesIn(kMethods), test_name);

TEST(MethodNames, RoundTrip) {
    for (Method m : kMethods) {
        EXPECT_EQ(parse_method(method_name(m)), m);
    }
    EXPECT_EQ(parse_method("nelder-mead"), Method::NelderMead);
    EXPECT_EQ(parse_method("powell"), Method::Powell);
    EXPECT_EQ(parse_method("cobyla"), Method::Cobyla);
    EXPECT_THROW(parse_method("bfgs"), ValidationError);
}

TEST(OptimizerConfig, Validation) {
    OptimizerConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.ftol, 0.01);
    EXPECT_EQ(c.max_evals, 300);
    EXPECT_EQ(c.initial_step, 0.3);
    c.ftol = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.max_evals = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.initial_step = -1;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.restarts = -1;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.final_step = -1;
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST_P(EachMethod, ConvexQuadratic) {
    std::vector<double> x0(6, 0.0);
    OptResult r = minimize(shifted_quadratic, x0, tight(GetParam()));
    double bound = GetParam() == Method::Cobyla ? 1e-4 : 1e-6;
    EXPECT_LT(r.best_value, bound);
    EXPECT_TRUE(r.converged);
    for (double v : r.best_theta) {
        EXPECT_NEAR(v, 1.0, 1e-2);
    }
}

TEST_P(EachMethod, ConstantFunctionStopsQuickly) {
    std::vector<double> x0(6, 0.5);
    OptimizerConfig c;
    c.method = GetParam();
    OptResult r = minimize([](std::span<const double>) { return 3.0; }, x0, c);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.best_value, 3.0);
    EXPECT_LE(r.n_evals, 60);
    if (GetParam() == Method::NelderMead) {
        EXPECT_EQ(r.n_evals, 7);
    }
}

TEST_P(EachMethod, RespectsBudget) {
    std::vector<double> x0(6, 0.0);
    for (int budget : {1, 5, 17, 40}) {
        OptimizerConfig c = tight(GetParam());
        c.max_evals = budget;
        OptResult r = minimize(shifted_quadratic, x0, c);
        EXPECT_LE(r.n_evals, budget);
        EXPECT_EQ(static_cast<int>(r.trace.size()), r.n_evals);
        EXPECT_FALSE(r.converged);
    }
}

TEST_P(EachMethod, MonotoneRecordAndBestValue) {
    std::vector<double> x0{0.1, 2.0, -1.0, 0.4, 0.0, 3.0};
    auto f = [](std::span<const double> x) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); i++) {
            s += std::sin(x[i] * (1 + 0.1 * static_cast<double>(i))) + 0.05 * x[i] * x[i];
        }
        return s;
    };
    OptimizerConfig c;
    c.method = GetParam();
    c.max_evals = 400;
    OptResult r = minimize(f, x0, c);
    ASSERT_FALSE(r.trace.empty());
    double running = r.trace.front().value;
    for (const auto &t : r.trace) {
        running = std::min(running, t.value);
    }
    EXPECT_EQ(r.best_value, running);
    auto it = std::find_if(r.trace.begin(), r.trace.end(), [&](const auto &t) { return t.value == r.best_value; });
    ASSERT_NE(it, r.trace.end());
    EXPECT_EQ(it->theta, r.best_theta);
    EXPECT_EQ(f(r.best_theta), r.best_value);
}

TEST_P(EachMethod, Deterministic) {
    std::vector<double> x0{0.3, 0.1, 0.2, 0.9, 0.5, 0.7};
    OptimizerConfig c;
    c.method = GetParam();
    OptResult a = minimize(shifted_quadratic, x0, c);
    OptResult b = minimize(shifted_quadratic, x0, c);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); i++) {
        EXPECT_EQ(a.trace[i].theta, b.trace[i].theta);
        EXPECT_EQ(a.trace[i].value, b.trace[i].value);
    }
}

TEST_P(EachMethod, CountsOneEvaluationPerCall) {
    int calls = 0;
    auto f = [&](std::span<const double> x) {
        calls++;
        return shifted_quadratic(x);
    };
    std::vector<double> x0(6, 0.0);
    OptimizerConfig c;
    c.method = GetParam();
    OptResult r = minimize(f, x0, c);
    EXPECT_EQ(calls, r.n_evals);
}

TEST_P(EachMethod, RestartsStayWithinBudget) {
    std::vector<double> x0(6, 0.0);
    OptimizerConfig c;
    c.method = GetParam();
    c.restarts = 50;
    c.max_evals = 250;
    OptResult once = minimize(shifted_quadratic, x0, [&] {
        OptimizerConfig d = c;
        d.restarts = 0;
        return d;
    }());
    OptResult r = minimize(shifted_quadratic, x0, c);
    EXPECT_LE(r.n_evals, 250);
    EXPECT_EQ(static_cast<int>(r.trace.size()), r.n_evals);
    EXPECT_LE(r.best_value, once.best_value);
    EXPECT_GE(r.n_evals, once.n_evals);
}

TEST(Powell, SeparableAbsoluteValue) {
    std::vector<double> x0{0.7, -0.4, 1.3, -2.0, 0.2, 0.9};
    OptimizerConfig c;
    c.method = Method::Powell;
    c.max_evals = 2000;
    OptResult r = minimize(
        [](std::span<const double> x) {
            double s = 0;
            for (double v : x) {
                s += std::abs(v);
            }
            return s;
        },
        x0, c);
    EXPECT_LT(r.best_value, c.ftol);
}

TEST(NelderMead, FinalStepShrinksSimplexPastSpreadTest) {
    std::vector<double> x0(6, 0.0);
    OptimizerConfig loose;
    loose.method = Method::NelderMead;
    loose.max_evals = 5000;
    OptimizerConfig sized = loose;
    sized.final_step = 1e-5;
    OptResult a = minimize(shifted_quadratic, x0, loose);
    OptResult b = minimize(shifted_quadratic, x0, sized);
    EXPECT_TRUE(a.converged);
    EXPECT_TRUE(b.converged);
    EXPECT_GT(b.n_evals, a.n_evals);
    EXPECT_LT(b.best_value, a.best_value);
    EXPECT_LT(b.best_value, 1e-8);
}

TEST(IsSuccess, Examples) {
    OptResult r;
    r.best_value = -5.7;
    EXPECT_TRUE(is_success(r, -5.7));
    r.best_value = -5.7 + 0.02;
    EXPECT_FALSE(is_success(r, -5.7));
    r.best_value = -5.7 + 0.009;
    EXPECT_TRUE(is_success(r, -5.7));
}

// Each optimizer reaches the exact minimum of the noiseless objective from at
// least half of 100 random starts.
TEST_P(EachMethod, NoiselessVqeAtLeastHalfOfStarts) {
    const auto table = builtin_table();
    const auto &h = find_distance(table, 0.9);
    const double e0 = oracle_energy(h);
    VqeConfig cfg;
    cfg.mode = Mode::Analytic;
    OptimizerConfig oc = analytic_optimizer_defaults();
    oc.method = GetParam();
    auto f = [&](std::span<const double> t) {
        return energy_objective(std::span<const double, kNumAngles>(t.data(), kNumAngles), cfg, h);
    };
    int successes = 0;
    for (std::uint64_t s = 0; s < 100; s++) {
        WaveplateAngles t0 = random_angles(s);
        successes += is_success(minimize(f, std::span<const double>(t0), oc), e0);
    }
    RecordProperty("successes", successes);
    EXPECT_GE(successes, 50) << method_name(GetParam());
}

}  // namespace
}  // namespace qqvqe

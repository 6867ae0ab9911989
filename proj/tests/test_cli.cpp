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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qqvqe/cli.hpp"

namespace qqvqe {
namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class CliFiles : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qqvqe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }
    std::string path(const std::string &name) const {
        return (dir_ / name).string();
    }
    static std::string slurp(const std::string &p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }
    static void write(const std::string &p, const std::string &text) {
        std::ofstream(p, std::ios::binary) << text;
    }

    fs::path dir_;
};

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

TEST(Cli, HelpExitsZero) {
    CliRun r = cli({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("bench-optimizers"), std::string::npos);
}

TEST(Cli, UsageErrorsPrintSchemaAndExitOne) {
    for (const auto &args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"run", "--bogus"},
             {"--format", "xml", "oracle"},
             {"--mode", "exact", "run"},
             {"--seed", "abc", "oracle"},
         }) {
        CliRun r = cli(args);
        EXPECT_EQ(r.code, kExitValidation);
        EXPECT_NE(r.err.find("error:"), std::string::npos);
        EXPECT_NE(r.err.find("Usage:"), std::string::npos);
    }
}

TEST(Cli, ValidationErrorsExitOne) {
    EXPECT_EQ(cli({"run", "--r", "0.8"}).code, kExitValidation);
    EXPECT_EQ(cli({"--lambda", "1.5", "run"}).code, kExitValidation);
    EXPECT_EQ(cli({"--qem", "noise-sweep", "--lambdas", "0.2,1"}).code, kExitValidation);
    EXPECT_EQ(cli({"--optimizer", "bfgs", "run"}).code, kExitValidation);
    EXPECT_EQ(cli({"--shots", "0", "run"}).code, kExitValidation);
    EXPECT_EQ(cli({"curve", "--r", "0.9,x"}).code, kExitValidation);
    EXPECT_EQ(cli({"--table", "/nonexistent.csv", "oracle"}).code, kExitValidation);
    EXPECT_EQ(cli({"--gamma-file", "/nonexistent.json", "run"}).code, kExitValidation);
    EXPECT_EQ(cli({"bench-optimizers", "--trials", "0"}).code, kExitValidation);
}

TEST(Cli, RuntimeErrorsExitTwo) {
    CliRun r = cli({"--lambda", "1", "--qem", "--gamma-source", "analytic", "--mode", "analytic", "run"});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, OracleSingleDistance) {
    CliRun r = cli({"oracle", "--r", "0.9"});
    ASSERT_EQ(r.code, kExitOk);
    auto l = lines(r.out);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], "R,E0,reference");
    EXPECT_EQ(l[1], "0.9," + format_number(oracle_energy(find_distance(builtin_table(), 0.9))) + ",-2.863");
    EXPECT_NE(r.err.find("-2.863"), std::string::npos);
}

TEST(Cli, OracleAllRowsJson) {
    CliRun r = cli({"--format", "json", "oracle"});
    ASSERT_EQ(r.code, kExitOk);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["unit"], "MJ/mol");
    ASSERT_EQ(j["rows"].size(), 10u);
    for (const auto &row : j["rows"]) {
        double e0 = oracle_energy(find_distance(builtin_table(), row["R"].get<double>()));
        EXPECT_EQ(row["E0"].get<double>(), e0);
        EXPECT_EQ(row.contains("reference"), row["R"].get<double>() == 0.9);
    }
    EXPECT_TRUE(j.contains("note"));
}

TEST(Cli, EmptyCurve) {
    CliRun r = cli({"curve", "--r", ""});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_EQ(r.out, "R,energy,std,oracle,success\n");
}

TEST_F(CliFiles, CurveCsvToFile) {
    std::string out = path("curve.csv");
    CliRun r = cli({"--mode", "analytic", "--out", out, "curve", "--r", "0.9,0.5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    auto l = lines(slurp(out));
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0], "R,energy,std,oracle,success");
    EXPECT_EQ(l[1].rfind("0.5,", 0), 0u);
    EXPECT_EQ(l[2].rfind("0.9,", 0), 0u);
    EXPECT_NE(l[2].find(",true"), std::string::npos);
}

TEST(Cli, RunJsonSchemaAndDeterminism) {
    std::vector<std::string> args{"--lambda", "0.2", "--qem", "--seed", "7", "--format", "json", "run", "--r", "0.9"};
    CliRun a = cli(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    CliRun b = cli(args);
    EXPECT_EQ(a.out, b.out);
    auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["config"]["seed"], 7);
    EXPECT_EQ(j["config"]["lambda"], 0.2);
    EXPECT_EQ(j["config"]["qem"], true);
    EXPECT_EQ(j["config"]["mode"], "sampled");
    EXPECT_EQ(j["config"]["optimizer"]["method"], "cobyla");
    ASSERT_TRUE(j["gammas"].is_array());
    EXPECT_EQ(j["gammas"].size(), 4u);
    const auto &res = j["result"];
    int n = res["n_evals"];
    EXPECT_EQ(j["trace"].size(), static_cast<std::size_t>(n));
    EXPECT_EQ(j["trace"][0]["eval"], 1);
    EXPECT_EQ(j["trace"][0]["theta"].size(), 6u);
    EXPECT_EQ(res["total_shots"], static_cast<std::int64_t>(n) * 4 * 4000);
    EXPECT_EQ(res["unit"], "MJ/mol");
    for (const char *key : {"final_energy", "final_std", "best_value", "best_theta", "converged", "oracle_e0",
                            "success"}) {
        EXPECT_TRUE(res.contains(key)) << key;
    }
}

TEST(Cli, RunTraceCsv) {
    CliRun r = cli({"--mode", "analytic", "run"});
    ASSERT_EQ(r.code, kExitOk);
    auto l = lines(r.out);
    ASSERT_GT(l.size(), 7u);
    EXPECT_EQ(l[0], "eval,energy,H1,Q1,H2,Q2,H3,Q3");
    EXPECT_EQ(l[1].rfind("1,", 0), 0u);
}

TEST(Cli, FlagsReachTheOptimizer) {
    CliRun r = cli({"--optimizer", "powell", "--ftol", "0.02", "--max-evals", "40", "--initial-step", "0.2",
                    "--final-step", "0.001", "--restarts", "2", "--shots", "100", "--format", "json", "run"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    const auto &o = j["config"]["optimizer"];
    EXPECT_EQ(o["method"], "powell");
    EXPECT_EQ(o["ftol"], 0.02);
    EXPECT_EQ(o["max_evals"], 40);
    EXPECT_EQ(o["initial_step"], 0.2);
    EXPECT_EQ(o["final_step"], 0.001);
    EXPECT_EQ(o["restarts"], 2);
    EXPECT_EQ(j["config"]["shots"], 100);
    EXPECT_LE(j["result"]["n_evals"].get<int>(), 40);
}

TEST(Cli, NoiseSweepCsv) {
    CliRun r = cli({"--mode", "analytic", "--seed", "3", "noise-sweep", "--lambdas", "0.4,0.1", "--tomography-reps",
                    "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto l = lines(r.out);
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0], "lambda,lambda_std,E_unmitigated,E_mitigated,E_expected_noisy,oracle");
    EXPECT_EQ(l[1].rfind("0.1,", 0), 0u);
    EXPECT_EQ(l[2].rfind("0.4,", 0), 0u);
}

TEST_F(CliFiles, BenchCsvAndTrials) {
    std::string trials = path("trials.csv");
    CliRun r = cli({"bench-optimizers", "--trials", "3", "--methods", "powell,cobyla", "--trials-out", trials});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto l = lines(r.out);
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0], "optimizer,P_S,mean_evals,median_evals");
    EXPECT_EQ(l[1].rfind("powell,", 0), 0u);
    EXPECT_EQ(l[2].rfind("cobyla,", 0), 0u);
    auto t = lines(slurp(trials));
    ASSERT_EQ(t.size(), 7u);
    EXPECT_EQ(t[0], "optimizer,trial,best_value,final_energy,n_evals,success");
}

TEST_F(CliFiles, TomographyFileFeedsRun) {
    std::string gammas = path("gammas.json");
    CliRun t = cli({"--lambda", "0.3", "--format", "json", "--out", gammas, "tomography"});
    ASSERT_EQ(t.code, kExitOk) << t.err;
    GammaSet g = gammas_from_json(nlohmann::json::parse(slurp(gammas)));
    EXPECT_NEAR(estimate_depolarizing_lambda(g), 0.3, 0.02);

    CliRun r = cli({"--lambda", "0.3", "--qem", "--gamma-file", gammas, "--mode", "analytic", "--format", "json",
                    "run"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["config"]["gamma_source"], "file");
    EXPECT_EQ(j["gammas"], nlohmann::json::parse(slurp(gammas))["gammas"]);

    CliRun csv = cli({"--lambda", "0.3", "--mode", "analytic", "tomography"});
    ASSERT_EQ(csv.code, kExitOk);
    auto l = lines(csv.out);
    ASSERT_EQ(l.size(), 65u);
    EXPECT_EQ(l[0], "setting,outcome,prepared,probability");
    EXPECT_EQ(l[1], "ZZ,0,0,0.85");
    EXPECT_EQ(l[2], "ZZ,1,0,0.15");
}

TEST_F(CliFiles, ChannelAndDetectorFiles) {
    std::string channel = path("channel.json");
    write(channel, R"({"p": [[0.9, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0.1, 0, 0, 0]]})");
    std::string detector = path("detector.json");
    write(detector, R"({"entries": [0.95, 0.05, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]})");
    CliRun r = cli({"--channel-file", channel, "--detector-file", detector, "--mode", "analytic", "--format", "json",
                    "tomography"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    GammaSet g = gammas_from_json(nlohmann::json::parse(r.out));
    // ZZ: the Z flip on polarization leaves computational outcomes alone.
    EXPECT_NEAR(g[0](0, 0), 0.95, 1e-12);
    EXPECT_NEAR(g[0](1, 0), 0.05, 1e-12);

    write(channel, R"({"p": [[0.5]]})");
    EXPECT_EQ(cli({"--channel-file", channel, "run"}).code, kExitValidation);
    write(detector, R"({"entries": [1, 2]})");
    EXPECT_EQ(cli({"--detector-file", detector, "run"}).code, kExitValidation);
    write(detector, "not json");
    EXPECT_EQ(cli({"--detector-file", detector, "run"}).code, kExitValidation);
}

TEST_F(CliFiles, TableFromEnvironment) {
    std::string table = path("table.csv");
    write(table, "R,II,IZ,ZI,ZZ,IX,ZX,XI,XZ,XX\n3.0,-4,-1.1,-1.1,0.7,0,0,0,0,0\n");
    ASSERT_EQ(setenv("QQVQE_TABLE", table.c_str(), 1), 0);
    CliRun r = cli({"oracle", "--r", "3"});
    unsetenv("QQVQE_TABLE");
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(lines(r.out).at(1), "3,-5.5,");

    CliRun flag = cli({"--table", table, "oracle"});
    ASSERT_EQ(flag.code, kExitOk);
    EXPECT_EQ(lines(flag.out).size(), 12u);
    EXPECT_EQ(cli({"oracle", "--r", "3"}).code, kExitValidation);
}

TEST_F(CliFiles, OutputFilesAreByteIdentical) {
    for (const auto &sub : std::vector<std::vector<std::string>>{
             {"run"}, {"tomography"}, {"curve", "--r", "0.5,2.5"}, {"noise-sweep", "--lambdas", "0.2"}}) {
        std::vector<std::string> a{"--seed", "5", "--lambda", "0.1", "--qem", "--out", path("a.txt")};
        std::vector<std::string> b{"--seed", "5", "--lambda", "0.1", "--qem", "--out", path("b.txt")};
        a.insert(a.end(), sub.begin(), sub.end());
        b.insert(b.end(), sub.begin(), sub.end());
        ASSERT_EQ(cli(a).code, kExitOk);
        ASSERT_EQ(cli(b).code, kExitOk);
        std::string first = slurp(path("a.txt"));
        EXPECT_FALSE(first.empty());
        EXPECT_EQ(first, slurp(path("b.txt"))) << sub[0];
    }
}

}  // namespace
}  // namespace qqvqe

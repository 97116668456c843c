// Copyright 2026 The ResetLab Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "resetlab/cli.hpp"
#include "resetlab/device_config.hpp"
#include "resetlab/error.hpp"
#include "resetlab/io.hpp"

namespace fs = std::filesystem;

namespace resetlab {
namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("resetlab_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "resetlab");
    std::vector<char *> argv;
    for (auto &a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  }

  std::string out(const std::string &name) const { return (dir_ / name).string(); }

  std::string write(const std::string &name, const std::string &text) const {
    write_text_file(out(name), text);
    return out(name);
  }

  static std::string slurp(const std::string &path) { return read_text_file(path); }

  fs::path dir_;
};

void expect_manifest(const std::string &dir, const std::string &command) {
  const auto doc = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
  EXPECT_EQ(doc["command"], command);
  EXPECT_FALSE(doc["artifacts"].empty());
  for (const auto &a : doc["artifacts"]) EXPECT_TRUE(fs::is_regular_file(a.get<std::string>())) << a;
  for (const char *key : {"config_paths", "resolved_parameters", "seed", "version", "wall_clock_s"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
}

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"spectrum", "--levels", "1", "--out", out("a")}), 1);
  EXPECT_EQ(run({"spectrum", "--range", "4:5", "--out", out("a")}), 1);
}

TEST_F(Cli, MissingFilesAreInputErrors) {
  EXPECT_EQ(run({"sweep", "--scenario", "no_such_scenario", "--out", out("a")}), 1);
  EXPECT_EQ(run({"spectrum", "--config", out("missing.json"), "--out", out("a")}), 1);
  EXPECT_THROW(resolve_data_file("no_such_thing"), IoError);
}

TEST_F(Cli, MalformedScenarioIsAnInputError) {
  const std::string bad = write("bad.json", R"({"kind": "sweep", "device": "device_qcr.json",
      "objective": "qc_square", "qubit": "Q0", "coupler": "C0",
      "x": {"param": "duration_ns", "range": [1, 2]},
      "y": {"param": "detuning_ghz", "values": [0.0]}})");
  EXPECT_EQ(run({"sweep", "--scenario", bad, "--out", out("a")}), 1);
  const std::string wrong_kind = write("kind.json", R"({"kind": "optimize", "device": "device_qcr.json"})");
  EXPECT_EQ(run({"sweep", "--scenario", wrong_kind, "--out", out("a")}), 1);
  const std::string syntax = write("syntax.json", "{\"kind\": ");
  EXPECT_EQ(run({"sweep", "--scenario", syntax, "--out", out("a")}), 1);
}

TEST_F(Cli, ConvergenceFailureExitsTwo) {
  const std::string s = write("coarse.json", R"({
    "kind": "evolve", "device": "device_qcr.json", "initial": {"Q0": 1}, "duration_ns": 10.0,
    "schedule": [{"channel": "C0", "shape": "ramp",
                  "params": {"start_ghz": 0.0, "end_ghz": -1.5, "duration_ns": 10.0}}],
    "propagate": {"step_ps": 500.0, "scheme": "midpoint", "tolerance": 1e-14}})");
  EXPECT_EQ(run({"evolve", "--scenario", s, "--out", out("a")}), 2);
}

TEST_F(Cli, Spectrum) {
  ASSERT_EQ(run({"spectrum", "--sector", "1", "--range", "5.0:5.4:41", "--out", out("s")}), 0);
  const std::string csv = slurp(out("s/spectrum.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 42);
  expect_manifest(out("s"), "spectrum");
}

TEST_F(Cli, EvolveScenarioAndFlags) {
  ASSERT_EQ(run({"evolve", "--scenario", "evolve_smoke", "--out", out("e")}), 0);
  EXPECT_TRUE(fs::is_regular_file(out("e/trajectory.csv")));
  const auto fin = nlohmann::json::parse(slurp(out("e/final_state.json")));
  EXPECT_FALSE(fin.empty());
  expect_manifest(out("e"), "evolve");
  ASSERT_EQ(run({"evolve", "--config", "device_qcr", "--initial", "Q0=1,C0=0", "--duration", "2",
                 "--step-ps", "5", "--out", out("f")}),
            0);
  EXPECT_EQ(run({"evolve", "--config", "device_qcr", "--initial", "Q0=7", "--duration", "2",
                 "--out", out("g")}),
            1);
}

TEST_F(Cli, SmallSweep) {
  const std::string s = write("sweep.json", R"({
    "kind": "sweep", "device": "device_qcr.json", "objective": "qc_square",
    "qubit": "Q0", "coupler": "C0", "max_sector": 1,
    "x": {"param": "duration_ns", "unit": "ns", "range": [4.0, 6.0, 3]},
    "y": {"param": "detuning_ghz", "unit": "GHz", "values": [-0.05, 0.0, 0.05]},
    "propagate": {"step_ps": 10.0, "check_convergence": false}})");
  ASSERT_EQ(run({"sweep", "--scenario", s, "--out", out("w")}), 0);
  const std::string csv = slurp(out("w/grid.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "detuning_ghz\\duration_ns,4,5,6");
  const auto side = nlohmann::json::parse(slurp(out("w/grid.json")));
  EXPECT_EQ(side["shape"], nlohmann::json({3, 3}));
  EXPECT_EQ(side["nan_points"].size(), 0u);
  expect_manifest(out("w"), "sweep");
}

TEST_F(Cli, OptimizeIsByteIdentical) {
  ASSERT_EQ(run({"optimize", "--scenario", "optimize_small", "--out", out("o1")}), 0);
  ASSERT_EQ(run({"optimize", "--scenario", "optimize_small", "--out", out("o2")}), 0);
  for (const char *f : {"history.jsonl", "result.json"}) {
    EXPECT_EQ(slurp(out("o1/") + f), slurp(out("o2/") + f)) << f;
  }
  ASSERT_EQ(run({"optimize", "--scenario", "optimize_small", "--seed", "4", "--out", out("o3")}), 0);
  EXPECT_NE(slurp(out("o1/history.jsonl")), slurp(out("o3/history.jsonl")));
  const auto result = nlohmann::json::parse(slurp(out("o1/result.json")));
  EXPECT_LE(result["best_value"].get<double>(), result["initial_value"].get<double>());
  const auto manifest = nlohmann::json::parse(slurp(out("o3/manifest.json")));
  EXPECT_EQ(manifest["seed"], 4);
}

TEST_F(Cli, OracleCheck) {
  ASSERT_EQ(run({"oracle-check", "--out", out("c")}), 0);
  const auto doc = nlohmann::json::parse(slurp(out("c/oracle_check.json")));
  ASSERT_EQ(doc.size(), 4u);
  for (const auto &r : doc) EXPECT_TRUE(r["passed"].get<bool>()) << r["name"];
}

TEST_F(Cli, ProcessExitCodes) {
  const std::string exe = RESETLAB_CLI_PATH;
  auto status = [&](const std::string &args) {
    const int rc = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status("--version"), 0);
  EXPECT_EQ(status("sweep --scenario does_not_exist --out " + out("p")), 1);
  EXPECT_EQ(status("spectrum --range 4.0:4.2:5 --out " + out("p")), 0);
  EXPECT_TRUE(fs::is_regular_file(out("p/manifest.json")));
}

TEST_F(Cli, ScenarioHashTracksContent) {
  const std::string a = write("a.json", R"({"kind": "sweep", "device": "device_qcr.json"})");
  const std::string b = write("b.json", R"({"kind": "sweep", "device": "device_qcr.json", "n": 1})");
  EXPECT_EQ(load_scenario(a).hash, load_scenario(a).hash);
  EXPECT_NE(load_scenario(a).hash, load_scenario(b).hash);
  EXPECT_EQ(load_scenario("chevron").name, "chevron");
}

}  // namespace
}  // namespace resetlab

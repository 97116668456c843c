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

// Command-line front end and the scenario files it runs.
//
// A scenario is a JSON document with a "kind" and a "device" (a device file
// name or path). Relative device paths resolve against the scenario's
// directory first and then the data directory. Kinds:
//
//   evolve      "initial" {mode: level}, "schedule", "duration_ns"
//   sweep       "objective", "x"/"y" axes over named pulse parameters
//   optimize    "objective", "parameters" with bounds, "optimizer"
//   full_reset  "ancilla", "data", "schedule", "duration_ns",
//               "lru_channels" (removed for the spectator check)
//
// Objectives ("qc_square", "qc_adiabatic") run a QC swap from "qubit" into
// "coupler" and return the qubit reset error. Parameters of qc_square:
// duration_ns, detuning_ghz (qubit minus coupler during the pulse),
// edge_ns. Parameters of qc_adiabatic: tau_ns, f0_ghz, f_tau_ghz, g_ghz.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "resetlab/calib.hpp"
#include "resetlab/model.hpp"
#include "resetlab/protocol.hpp"

namespace resetlab {

/// RESETLAB_DATA_DIR from the environment, else the source tree's configs/.
std::string data_directory();

/// A path as given when it names an existing file; otherwise
/// <data>/<subdir>/<name>[.json]. Throws IoError when nothing matches.
std::string resolve_data_file(const std::string &name_or_path, const std::string &subdir = {});

/// Overrides shared by every command.
struct RunOverrides {
  std::optional<double> step_ps;
  std::optional<int> levels;
  std::optional<std::uint64_t> seed;
};

struct Scenario {
  std::string name;
  std::string path;
  std::string kind;
  std::string device_path;
  nlohmann::json doc;
  /// FNV-1a of the scenario text and the device text.
  std::string hash;
};

Scenario load_scenario(const std::string &name_or_path);
SystemModel scenario_system(const Scenario &scenario, const RunOverrides &overrides = {});
/// "propagate" block: step_ps, scheme, check_convergence, tolerance,
/// record_interval_ns; plus "dissipation".
ProtocolOptions scenario_protocol_options(const Scenario &scenario,
                                          const RunOverrides &overrides = {});

/// Pulse of a QC-swap objective for a complete parameter map.
PulseSpec qc_objective_pulse(const SystemModel &system, const std::string &objective,
                             const std::string &qubit, const std::string &coupler,
                             const std::map<std::string, double> &params);

/// Objective over the parameters named in `free`, with the rest taken from
/// `fixed`. The returned closure owns its context and is thread-safe.
Objective qc_objective(const Scenario &scenario, const std::vector<std::string> &free,
                       const RunOverrides &overrides = {});

struct SweepProblem {
  Objective objective;
  SweepAxis axis_x;
  SweepAxis axis_y;
};
SweepProblem sweep_problem(const Scenario &scenario, const RunOverrides &overrides = {});

struct OptimizeProblem {
  Objective objective;
  OptimizerConfig config;
  std::vector<std::string> names;
};
OptimizeProblem optimize_problem(const Scenario &scenario, const RunOverrides &overrides = {});

struct FullResetProblem {
  std::shared_ptr<const ProtocolContext> context;
  PulseSpec schedule;
  std::string ancilla;
  std::string data;
  double duration_ns = 0.0;
  std::vector<std::string> lru_channels;
};
FullResetProblem full_reset_problem(const Scenario &scenario, const RunOverrides &overrides = {});

struct OracleResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Analytic-vs-numeric equivalence checks: Rabi swap, damped coupler
/// decay in all three regimes, one Landau-Zener sweep, adiabatic pulse
/// endpoints.
std::vector<OracleResult> run_oracle_suites();

/// Entry point of the `resetlab` binary. Returns 0 on success, 1 on
/// invalid input, 2 on runtime or convergence failure.
int run_cli(int argc, char **argv);

}  // namespace resetlab

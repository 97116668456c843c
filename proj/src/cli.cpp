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

#include "resetlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "resetlab/analytic.hpp"
#include "resetlab/device_config.hpp"
#include "resetlab/dynamics.hpp"
#include "resetlab/error.hpp"
#include "resetlab/io.hpp"
#include "resetlab/pulses.hpp"

#ifndef RESETLAB_DATA_DIR
#define RESETLAB_DATA_DIR "configs"
#endif
#ifndef RESETLAB_VERSION
#define RESETLAB_VERSION "0.0.0"
#endif

namespace resetlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string data_directory() {
  if (const char *env = std::getenv("RESETLAB_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return RESETLAB_DATA_DIR;
}

std::string resolve_data_file(const std::string &name_or_path, const std::string &subdir) {
  if (fs::is_regular_file(name_or_path)) return name_or_path;
  const fs::path root(data_directory());
  std::vector<fs::path> candidates;
  for (const fs::path &dir : {subdir.empty() ? root : root / subdir, root}) {
    candidates.push_back(dir / name_or_path);
    candidates.push_back(dir / (name_or_path + ".json"));
  }
  for (const auto &c : candidates) {
    if (fs::is_regular_file(c)) return c.string();
  }
  throw IoError("no such file: '" + name_or_path + "'", name_or_path);
}

namespace {

double number_at(const json &doc, const std::string &key, const std::string &where) {
  if (!doc.contains(key)) throw ValidationError("missing field '" + key + "'", where + "." + key);
  if (!doc[key].is_number()) {
    throw ValidationError("field '" + key + "' must be a number", where + "." + key);
  }
  return doc[key].get<double>();
}

std::string string_at(const json &doc, const std::string &key, const std::string &where) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    throw ValidationError("missing string field '" + key + "'", where + "." + key);
  }
  return doc[key].get<std::string>();
}

std::vector<std::string> string_list(const json &doc, const std::string &key,
                                     const std::string &where) {
  std::vector<std::string> out;
  if (!doc.contains(key)) return out;
  if (!doc[key].is_array()) throw ValidationError("expected a list of names", where + "." + key);
  for (const auto &item : doc[key]) {
    if (!item.is_string()) throw ValidationError("expected a list of names", where + "." + key);
    out.push_back(item.get<std::string>());
  }
  return out;
}

void require_kind(const Scenario &scenario, const std::string &kind) {
  if (scenario.kind != kind) {
    throw ValidationError("scenario '" + scenario.name + "' has kind '" + scenario.kind +
                              "', this command needs '" + kind + "'",
                          "kind");
  }
}

}  // namespace

Scenario load_scenario(const std::string &name_or_path) {
  Scenario s;
  s.path = resolve_data_file(name_or_path, "scenarios");
  const std::string text = read_text_file(s.path);
  s.doc = parse_json_text(text, s.path);
  if (!s.doc.is_object()) throw ValidationError("scenario must be a JSON object", s.path);
  s.kind = string_at(s.doc, "kind", "scenario");
  s.name = s.doc.value("name", fs::path(s.path).stem().string());
  const std::string device = string_at(s.doc, "device", "scenario");
  const fs::path local = fs::path(s.path).parent_path() / device;
  s.device_path = fs::is_regular_file(local) ? local.string() : resolve_data_file(device);
  s.hash = fnv1a_hex(text + read_text_file(s.device_path));
  return s;
}

SystemModel scenario_system(const Scenario &scenario, const RunOverrides &overrides) {
  SystemModel system = load_device_config(scenario.device_path);
  if (overrides.levels) system = system.with_levels(*overrides.levels);
  return system;
}

ProtocolOptions scenario_protocol_options(const Scenario &scenario, const RunOverrides &overrides) {
  ProtocolOptions options;
  const json p = scenario.doc.value("propagate", json::object());
  if (!p.is_object()) throw ValidationError("'propagate' must be an object", "propagate");
  if (p.contains("step_ps")) options.propagate.step_ns = number_at(p, "step_ps", "propagate") * 1e-3;
  if (p.contains("scheme")) {
    const std::string scheme = string_at(p, "scheme", "propagate");
    if (scheme == "magnus4") {
      options.propagate.scheme = Scheme::kMagnus4;
    } else if (scheme == "midpoint") {
      options.propagate.scheme = Scheme::kMidpoint;
    } else {
      throw ValidationError("unknown scheme '" + scheme + "'", "propagate.scheme");
    }
  }
  options.propagate.check_convergence = p.value("check_convergence", true);
  if (p.contains("tolerance")) {
    options.propagate.convergence_tolerance = number_at(p, "tolerance", "propagate");
  }
  if (p.contains("record_interval_ns")) {
    options.propagate.record_interval_ns = number_at(p, "record_interval_ns", "propagate");
  }
  options.dissipation = scenario.doc.value("dissipation", true);
  if (overrides.step_ps) {
    if (!(*overrides.step_ps > 0.0)) throw ValidationError("step must be positive", "--step-ps");
    options.propagate.step_ns = *overrides.step_ps * 1e-3;
  }
  if (!(options.propagate.step_ns > 0.0)) {
    throw ValidationError("step must be positive", "propagate.step_ps");
  }
  return options;
}

PulseSpec qc_objective_pulse(const SystemModel &system, const std::string &objective,
                             const std::string &qubit, const std::string &coupler,
                             const std::map<std::string, double> &params) {
  auto get = [&](const std::string &key) {
    const auto it = params.find(key);
    if (it == params.end()) throw ValidationError("missing pulse parameter '" + key + "'", key);
    return it->second;
  };
  const double f_q = system.frequency_ghz(system.mode_index(qubit));
  const double f_c = system.frequency_ghz(system.mode_index(coupler));
  if (objective == "qc_square") {
    const auto edge = params.find("edge_ns");
    SquareShape shape{f_q - get("detuning_ghz") - f_c, get("duration_ns"),
                      edge == params.end() ? 0.0 : edge->second};
    return PulseSpec::single(coupler, shape);
  }
  if (objective == "qc_adiabatic") {
    AdiabaticShape shape{{get("tau_ns"), get("f0_ghz"), get("f_tau_ghz"), get("g_ghz")}, f_q - f_c};
    return PulseSpec::single(coupler, shape);
  }
  throw ValidationError("unknown objective '" + objective + "'", "objective");
}

Objective qc_objective(const Scenario &scenario, const std::vector<std::string> &free,
                       const RunOverrides &overrides) {
  const json &doc = scenario.doc;
  const std::string objective = string_at(doc, "objective", "scenario");
  const std::string qubit = string_at(doc, "qubit", "scenario");
  const std::string coupler = string_at(doc, "coupler", "scenario");
  const int level = doc.value("preparation", 1);
  const QubitPreparation prep = preparation_from_level(level);
  std::map<std::string, double> fixed;
  if (doc.contains("fixed")) {
    if (!doc["fixed"].is_object()) throw ValidationError("'fixed' must be an object", "fixed");
    for (const auto &[key, value] : doc["fixed"].items()) fixed[key] = number_at(doc["fixed"], key, "fixed");
  }
  auto context = std::make_shared<const ProtocolContext>(
      scenario_system(scenario, overrides), scenario_protocol_options(scenario, overrides),
      doc.value("max_sector", 2));
  // Fail early on a malformed parameter set rather than at every point.
  {
    std::map<std::string, double> probe = fixed;
    for (const auto &name : free) probe.emplace(name, 1.0);
    auto copy = probe;
    try {
      qc_objective_pulse(context->system(), objective, qubit, coupler, copy);
    } catch (const InvalidPulseError &) {
      // Probe values may lie outside a valid trajectory; only names matter.
    }
  }
  return [context, objective, qubit, coupler, prep, fixed, free](const std::vector<double> &x) {
    if (x.size() != free.size()) throw ValidationError("parameter count mismatch");
    std::map<std::string, double> params = fixed;
    for (std::size_t i = 0; i < free.size(); ++i) params[free[i]] = x[i];
    const PulseSpec pulse = qc_objective_pulse(context->system(), objective, qubit, coupler, params);
    return qc_swap(*context, coupler, qubit, pulse, prep).reset_error;
  };
}

namespace {

SweepAxis axis_from_json(const json &doc, const std::string &where) {
  if (!doc.is_object()) throw ValidationError("axis must be an object", where);
  SweepAxis axis;
  axis.name = string_at(doc, "param", where);
  axis.unit = doc.value("unit", "");
  if (doc.contains("values")) {
    for (const auto &v : doc["values"]) {
      if (!v.is_number()) throw ValidationError("axis values must be numbers", where + ".values");
      axis.values.push_back(v.get<double>());
    }
  } else if (doc.contains("range")) {
    const json &r = doc["range"];
    if (!r.is_array() || r.size() != 3 || !r[0].is_number() || !r[1].is_number() ||
        !r[2].is_number_integer()) {
      throw ValidationError("range must be [lo, hi, points]", where + ".range");
    }
    axis = linear_axis(axis.name, axis.unit, r[0].get<double>(), r[1].get<double>(), r[2].get<int>());
  } else {
    throw ValidationError("axis needs 'values' or 'range'", where);
  }
  validate_axis(axis);
  return axis;
}

}  // namespace

SweepProblem sweep_problem(const Scenario &scenario, const RunOverrides &overrides) {
  require_kind(scenario, "sweep");
  SweepProblem p;
  p.axis_x = axis_from_json(scenario.doc.value("x", json()), "x");
  p.axis_y = axis_from_json(scenario.doc.value("y", json()), "y");
  if (p.axis_x.name == p.axis_y.name) throw ValidationError("axes must differ", "y.param");
  p.objective = qc_objective(scenario, {p.axis_x.name, p.axis_y.name}, overrides);
  return p;
}

OptimizeProblem optimize_problem(const Scenario &scenario, const RunOverrides &overrides) {
  require_kind(scenario, "optimize");
  const json &doc = scenario.doc;
  OptimizeProblem p;
  if (!doc.contains("parameters") || !doc["parameters"].is_array() || doc["parameters"].empty()) {
    throw ValidationError("'parameters' must be a non-empty list", "parameters");
  }
  for (std::size_t i = 0; i < doc["parameters"].size(); ++i) {
    const json &item = doc["parameters"][i];
    const std::string where = "parameters[" + std::to_string(i) + "]";
    p.names.push_back(string_at(item, "name", where));
    p.config.initial.push_back(number_at(item, "initial", where));
    p.config.lower.push_back(number_at(item, "lower", where));
    p.config.upper.push_back(number_at(item, "upper", where));
  }
  const json opt = doc.value("optimizer", json::object());
  p.config.population = opt.value("population", 0);
  p.config.seed = opt.value("seed", std::uint64_t{1});
  p.config.max_evaluations = opt.value("max_evaluations", 2000);
  p.config.target = opt.value("target", 0.0);
  p.config.sigma0 = opt.value("sigma0", 0.2);
  if (overrides.seed) p.config.seed = *overrides.seed;
  p.objective = qc_objective(scenario, p.names, overrides);
  return p;
}

FullResetProblem full_reset_problem(const Scenario &scenario, const RunOverrides &overrides) {
  require_kind(scenario, "full_reset");
  const json &doc = scenario.doc;
  FullResetProblem p;
  const SystemModel system = scenario_system(scenario, overrides);
  p.schedule = pulse_from_json(doc.value("schedule", json::array()), "schedule");
  check_channels(system, p.schedule);
  p.ancilla = string_at(doc, "ancilla", "scenario");
  p.data = string_at(doc, "data", "scenario");
  p.duration_ns = doc.contains("duration_ns") ? number_at(doc, "duration_ns", "scenario")
                                              : p.schedule.duration();
  p.lru_channels = string_list(doc, "lru_channels", "scenario");
  p.context = std::make_shared<const ProtocolContext>(
      system, scenario_protocol_options(scenario, overrides), doc.value("max_sector", 4));
  return p;
}

// ---------------------------------------------------------------------------
// Oracle suites

namespace {

SystemModel pair_system(double f_a, double f_b, double g, bool b_resonator, double kappa_b) {
  DeviceDescription d;
  d.modes.push_back({"Q", TransmonParams{f_a, -0.25, 3, false}});
  if (b_resonator) {
    d.modes.push_back({"R", ResonatorParams{f_b, kappa_b, 3, 0.0}});
  } else {
    d.modes.push_back({"C", TransmonParams{f_b, -0.15, 3, true}});
  }
  d.couplings.push_back({"Q", d.modes[1].name, g});
  return build_system(d);
}

OracleResult rabi_suite() {
  const double g = 0.047;
  const SystemModel system = pair_system(5.0, 5.0, g, false, 0.0);
  PropagateOptions opt;
  opt.record_interval_ns = 0.05;
  const double duration = 1.0 / g;  // two full periods
  const Trajectory t = propagate(system, {}, QuantumState::basis(system, {1, 0}), duration, {}, opt);
  const auto col = static_cast<Eigen::Index>(
      std::find(t.tracked.begin(), t.tracked.end(), system.basis_index({1, 0})) - t.tracked.begin());
  double worst = 0.0;
  for (std::size_t i = 0; i < t.times_ns.size(); ++i) {
    const double expected = rabi_population(g, t.times_ns[i]).first;
    worst = std::max(worst, std::abs(t.populations(static_cast<Eigen::Index>(i), col) - expected));
  }
  return {"rabi", worst, 1e-8, worst <= 1e-8};
}

OracleResult damped_suite() {
  const double g = 0.05;
  double worst = 0.0;
  for (double kappa : {0.04, 0.1, 0.25}) {
    // The coupler is the fixed mode of this pair; the resonator carries the loss.
    const SystemModel system = pair_system(6.0, 6.0, g, true, propagator_linewidth(kappa));
    PropagateOptions opt;
    opt.record_interval_ns = 0.25;
    const Trajectory t = propagate(system, {}, QuantumState::basis(system, {1, 0}), 40.0,
                                   resonator_dissipators(system), opt);
    const auto col = static_cast<Eigen::Index>(
        std::find(t.tracked.begin(), t.tracked.end(), system.basis_index({1, 0})) - t.tracked.begin());
    for (std::size_t i = 0; i < t.times_ns.size(); ++i) {
      const double expected = damped_coupler_population(g, kappa, t.times_ns[i]);
      worst = std::max(worst, std::abs(t.populations(static_cast<Eigen::Index>(i), col) - expected));
    }
  }
  return {"damped_decay", worst, 1e-6, worst <= 1e-6};
}

OracleResult lz_suite() {
  const double g_ghz = 0.047;
  const double g = kTwoPi * g_ghz;
  const double alpha = kTwoPi * g * g / std::log(2.0);
  const double span = 200.0 * g / std::numbers::pi;  // alpha T / 2 = 200 g (angular)
  const double duration = kTwoPi * span / alpha;
  const SystemModel system = pair_system(5.0, 5.0, g_ghz, false, 0.0);
  const PulseSpec ramp = PulseSpec::single("C", RampShape{span / 2.0, -span / 2.0, duration});
  const Trajectory t = propagate(system, ramp, QuantumState::basis(system, {1, 0}), duration);
  const double survival = std::norm(t.final_state.amplitudes()(
      static_cast<Eigen::Index>(system.basis_index({1, 0}))));
  const double err = std::abs(survival - lz_transition_probability({g, alpha}));
  return {"landau_zener", err, 2e-2, err <= 2e-2};
}

OracleResult adiabatic_suite() {
  double worst = 0.0;
  const AdiabaticPulseParams cases[] = {
      {9.0, 0.2, -0.05, 0.071}, {31.0, 1.2, -0.1, 0.04}, {20.0, -0.3, 0.25, 0.06}};
  for (const auto &p : cases) {
    worst = std::max(worst, std::abs(adiabatic_detuning(p, 0.0) - p.f0_ghz) / std::abs(p.f0_ghz));
    worst = std::max(worst,
                     std::abs(adiabatic_detuning(p, p.tau_ns) - p.f_tau_ghz) / std::abs(p.f_tau_ghz));
  }
  return {"adiabatic_endpoints", worst, 1e-9, worst <= 1e-9};
}

}  // namespace

std::vector<OracleResult> run_oracle_suites() {
  return {rabi_suite(), damped_suite(), lz_suite(), adiabatic_suite()};
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct CommonArgs {
  std::string config;
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> step_ps;
  std::optional<int> levels;

  RunOverrides overrides() const { return {step_ps, levels, seed}; }
};

class ManifestWriter {
 public:
  ManifestWriter(std::string command, const CommonArgs &args)
      : command_(std::move(command)), out_(args.out), start_(std::chrono::steady_clock::now()) {
    params_["out"] = args.out;
    if (args.seed) params_["seed"] = *args.seed;
    if (args.step_ps) params_["step_ps"] = *args.step_ps;
    if (args.levels) params_["levels"] = *args.levels;
    seed_ = args.seed;
  }

  void config(const std::string &path) { configs_.push_back(path); }
  json &params() { return params_; }
  void seed(std::uint64_t s) { seed_ = s; }

  /// Writes an artifact under the output directory and records it.
  void artifact(const std::string &name, const std::string &content) {
    const std::string path = (fs::path(out_) / name).string();
    write_text_file(path, content);
    artifacts_.push_back(path);
  }

  void finish() const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json doc{{"command", command_},
             {"config_paths", configs_},
             {"resolved_parameters", params_},
             {"seed", seed_ ? json(*seed_) : json(nullptr)},
             {"artifacts", artifacts_},
             {"version", RESETLAB_VERSION},
             {"wall_clock_s", wall},
             {"finished_at", stamp}};
    write_text_file((fs::path(out_) / "manifest.json").string(), dump_json(doc));
  }

 private:
  std::string command_;
  std::string out_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> configs_;
  std::vector<std::string> artifacts_;
  json params_ = json::object();
  std::optional<std::uint64_t> seed_;
};

SystemModel load_device(const std::string &name_or_path, const RunOverrides &overrides,
                        ManifestWriter &manifest) {
  const std::string path = resolve_data_file(name_or_path);
  manifest.config(path);
  SystemModel system = load_device_config(path);
  if (overrides.levels) system = system.with_levels(*overrides.levels);
  manifest.params()["device"] = device_description_to_json(system.description());
  for (const auto &w : system.warnings()) std::cerr << "warning: " << w << '\n';
  return system;
}

Scenario load_scenario_into(const std::string &name, ManifestWriter &manifest) {
  Scenario s = load_scenario(name);
  manifest.config(s.path);
  manifest.config(s.device_path);
  manifest.params()["scenario"] = s.doc;
  manifest.params()["scenario_hash"] = s.hash;
  manifest.params()["device"] =
      device_description_to_json(load_device_config(s.device_path).description());
  return s;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
};

Range parse_range(const std::string &text) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.points) || c1 != ':' || c2 != ':' || !is.eof()) {
    throw ValidationError("range must look like lo:hi:points", "--range");
  }
  if (r.points < 2 || !(r.hi > r.lo)) {
    throw ValidationError("range needs hi > lo and at least two points", "--range");
  }
  return r;
}

/// "Q0=1,C0=0" -> occupations.
BasisState parse_initial(const SystemModel &system, const std::string &text) {
  BasisState state(system.num_modes(), 0);
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("expected mode=level", "--initial");
    const std::size_t k = system.mode_index(item.substr(0, eq));
    int level = 0;
    try {
      level = std::stoi(item.substr(eq + 1));
    } catch (const std::exception &) {
      throw ValidationError("bad level in '" + item + "'", "--initial");
    }
    if (level < 0 || level >= system.levels(k)) {
      throw ValidationError("level out of range in '" + item + "'", "--initial");
    }
    state[k] = level;
  }
  return state;
}

json final_state_json(const Trajectory &t, const SystemModel &system) {
  json pops = json::object();
  for (const auto &[state, p] : populations(t.final_state, system)) {
    if (p > 0.0) pops[system.label(state)] = p;
  }
  return json{{"populations", pops},
              {"norm", t.final_state.norm()},
              {"steps", t.steps},
              {"convergence_delta",
               std::isnan(t.convergence_delta) ? json(nullptr) : json(t.convergence_delta)}};
}

int cmd_spectrum(const CommonArgs &args, const std::string &coupler_arg, int sector,
                 const std::string &range_text) {
  ManifestWriter manifest("spectrum", args);
  const SystemModel system =
      load_device(args.config.empty() ? "device_q0q1c0" : args.config, args.overrides(), manifest);
  std::string coupler = coupler_arg;
  if (coupler.empty()) {
    const auto tunable = system.tunable_modes();
    if (tunable.empty()) throw ValidationError("device has no tunable mode", "--coupler");
    coupler = system.mode_name(tunable.front());
  }
  const Range r = parse_range(range_text);
  manifest.params()["coupler"] = coupler;
  manifest.params()["sector"] = sector;
  manifest.params()["range"] = {r.lo, r.hi, r.points};
  const SpectrumCurve curve = spectrum_scan(system, coupler, r.lo, r.hi, r.points, sector);
  manifest.artifact("spectrum.csv", spectrum_csv(curve, system));
  manifest.finish();
  std::cout << "spectrum: " << curve.labels.size() << " traces x " << r.points << " points\n";
  return 0;
}

int cmd_evolve(const CommonArgs &args, const std::string &initial_text, double duration_arg) {
  ManifestWriter manifest("evolve", args);
  SystemModel system;
  PulseSpec schedule;
  BasisState initial;
  double duration = duration_arg;
  ProtocolOptions options;
  if (!args.scenario.empty()) {
    const Scenario s = load_scenario_into(args.scenario, manifest);
    require_kind(s, "evolve");
    system = scenario_system(s, args.overrides());
    schedule = pulse_from_json(s.doc.value("schedule", json::array()), "schedule");
    options = scenario_protocol_options(s, args.overrides());
    initial.assign(system.num_modes(), 0);
    const json init = s.doc.value("initial", json::object());
    for (const auto &[name, level] : init.items()) {
      if (!level.is_number_integer()) throw ValidationError("level must be an integer", "initial." + name);
      initial[system.mode_index(name)] = level.get<int>();
    }
    if (duration < 0.0) {
      duration = s.doc.contains("duration_ns") ? number_at(s.doc, "duration_ns", "scenario")
                                               : schedule.duration();
    }
  } else {
    if (args.config.empty()) throw ValidationError("evolve needs --config or --scenario", "--config");
    system = load_device(args.config, args.overrides(), manifest);
    options.propagate.step_ns = args.step_ps.value_or(2.0) * 1e-3;
    options.propagate.record_interval_ns = 0.1;
    if (duration < 0.0) throw ValidationError("evolve needs --duration", "--duration");
    initial.assign(system.num_modes(), 0);
  }
  if (!initial_text.empty()) initial = parse_initial(system, initial_text);
  if (options.propagate.record_interval_ns <= 0.0) options.propagate.record_interval_ns = 0.1;
  check_channels(system, schedule);
  manifest.params()["initial"] = system.label(initial);
  manifest.params()["duration_ns"] = duration;
  manifest.params()["step_ns"] = options.propagate.step_ns;
  const FrequencyMap loss = options.dissipation ? resonator_dissipators(system) : FrequencyMap{};
  const Trajectory t = propagate(system, schedule, QuantumState::basis(system, initial), duration,
                                 loss, options.propagate);
  manifest.artifact("trajectory.csv", trajectory_csv(t, system));
  manifest.artifact("final_state.json", dump_json(final_state_json(t, system)));
  manifest.finish();
  std::cout << "evolve: " << t.steps << " steps, final norm " << format_double(t.final_state.norm())
            << '\n';
  return 0;
}

int cmd_sweep(const CommonArgs &args) {
  ManifestWriter manifest("sweep", args);
  const Scenario s = load_scenario_into(args.scenario.empty() ? "chevron" : args.scenario, manifest);
  const SweepProblem p = sweep_problem(s, args.overrides());
  const SweepGrid grid = sweep2d(p.objective, p.axis_x, p.axis_y);
  manifest.artifact("grid.csv", grid_csv(grid));
  manifest.artifact("grid.json", dump_json(grid_sidecar(grid, s.hash)));
  manifest.finish();
  std::size_t i = 0, j = 0;
  const double best = grid.min_error(&i, &j);
  std::cout << "sweep: min error " << format_double(best) << " at " << p.axis_x.name << "="
            << format_double(p.axis_x.values[i]) << ", " << p.axis_y.name << "="
            << format_double(p.axis_y.values[j]) << "; " << grid.diagnostics.size()
            << " failed points\n";
  return 0;
}

int cmd_protocol(const CommonArgs &args) {
  ManifestWriter manifest("protocol", args);
  const Scenario s =
      load_scenario_into(args.scenario.empty() ? "full_reset_83ns" : args.scenario, manifest);
  const FullResetProblem p = full_reset_problem(s, args.overrides());
  const ResetReport report = full_reset(*p.context, p.schedule, p.ancilla, p.data, p.duration_ns);
  json doc = report_to_json(report);
  const PulseSpec spectator_schedule = without_channels(p.schedule, p.lru_channels);
  doc["spectator_disturbance"] = spectator_disturbance(*p.context, spectator_schedule, p.data, 1);
  manifest.artifact("report.json", dump_json(doc));
  manifest.artifact("report.csv", report_csv(report));
  manifest.artifact("schedule.csv", pulse_csv(p.schedule, 10.0));
  manifest.finish();
  std::cout << "protocol: " << report.entries.size() << " preparations over "
            << format_double(report.duration_ns) << " ns, mean ancilla error "
            << format_double(report.mean_ancilla_error()) << '\n';
  return 0;
}

int cmd_optimize(const CommonArgs &args) {
  ManifestWriter manifest("optimize", args);
  const Scenario s =
      load_scenario_into(args.scenario.empty() ? "optimize_benchmark" : args.scenario, manifest);
  const OptimizeProblem p = optimize_problem(s, args.overrides());
  manifest.seed(p.config.seed);
  const double initial = p.objective(p.config.initial);
  const OptimizerResult r = cmaes_minimize(p.objective, p.config);
  json best = json::object();
  for (std::size_t k = 0; k < p.names.size(); ++k) best[p.names[k]] = r.best_parameters[k];
  json doc{{"initial_value", initial},
           {"best_value", r.best_value},
           {"best_parameters", best},
           {"evaluations", r.evaluations},
           {"stop_reason", r.stop_reason},
           {"seed", p.config.seed}};
  manifest.artifact("history.jsonl", history_jsonl(r));
  manifest.artifact("result.json", dump_json(doc));
  manifest.finish();
  std::cout << "optimize: " << format_double(initial) << " -> " << format_double(r.best_value)
            << " in " << r.evaluations << " evaluations (" << r.stop_reason << ")\n";
  return 0;
}

int cmd_oracle_check(const CommonArgs &args) {
  ManifestWriter manifest("oracle-check", args);
  const auto results = run_oracle_suites();
  json doc = json::array();
  bool ok = true;
  for (const auto &r : results) {
    doc.push_back({{"name", r.name},
                   {"max_error", r.max_error},
                   {"tolerance", r.tolerance},
                   {"passed", r.passed}});
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " max_error=" << format_double(r.max_error)
              << " tolerance=" << format_double(r.tolerance) << '\n';
    ok = ok && r.passed;
  }
  manifest.artifact("oracle_check.json", dump_json(doc));
  manifest.finish();
  return ok ? 0 : 2;
}

void add_common(CLI::App *cmd, CommonArgs &args) {
  cmd->add_option("--config", args.config, "device file (name or path)");
  cmd->add_option("--scenario", args.scenario, "scenario file (name or path)");
  cmd->add_option("--out", args.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", args.seed, "optimizer seed");
  cmd->add_option("--step-ps", args.step_ps, "integration step in ps");
  cmd->add_option("--levels", args.levels, "levels per mode")->check(CLI::Range(2, 64));
}

}  // namespace

int run_cli(int argc, char **argv) {
  CLI::App app{"Simulation of unconditional qubit reset and leakage reduction via tunable couplers",
               "resetlab"};
  app.set_version_flag("--version", RESETLAB_VERSION);
  app.require_subcommand(1);

  CommonArgs args;
  std::string coupler;
  int sector = 1;
  std::string range = "4.0:7.0:301";
  std::string initial;
  double duration = -1.0;

  auto *spectrum = app.add_subcommand("spectrum", "eigenenergies of one sector versus a coupler");
  add_common(spectrum, args);
  spectrum->add_option("--coupler", coupler, "tunable mode to sweep");
  spectrum->add_option("--sector", sector, "excitation number")->capture_default_str();
  spectrum->add_option("--range", range, "lo:hi:points in GHz")->capture_default_str();

  auto *evolve = app.add_subcommand("evolve", "propagate one initial state");
  add_common(evolve, args);
  evolve->add_option("--initial", initial, "mode=level list, e.g. Q0=1");
  evolve->add_option("--duration", duration, "ns");

  auto *sweep = app.add_subcommand("sweep", "2D calibration sweep");
  add_common(sweep, args);
  auto *protocol = app.add_subcommand("protocol", "nine-state full reset");
  add_common(protocol, args);
  auto *optimize = app.add_subcommand("optimize", "CMA-ES pulse optimization");
  add_common(optimize, args);
  auto *oracle = app.add_subcommand("oracle-check", "analytic versus numeric checks");
  add_common(oracle, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*spectrum) return cmd_spectrum(args, coupler, sector, range);
    if (*evolve) return cmd_evolve(args, initial, duration);
    if (*sweep) return cmd_sweep(args);
    if (*protocol) return cmd_protocol(args);
    if (*optimize) return cmd_optimize(args);
    if (*oracle) return cmd_oracle_check(args);
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what();
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << '\n';
    return 1;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << " [" << e.path() << "]\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace resetlab

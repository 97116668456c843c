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

#include "resetlab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resetlab/error.hpp"
#include "resetlab/io.hpp"

namespace resetlab {

using nlohmann::json;

std::string to_string(QubitPreparation preparation) {
  switch (preparation) {
    case QubitPreparation::kGround:
      return "|0>";
    case QubitPreparation::kExcited:
      return "|1>";
    case QubitPreparation::kSecond:
      return "|2>";
    case QubitPreparation::kSuperposition:
      return "(|1>+|2>)/sqrt2";
  }
  return "?";
}

QubitPreparation preparation_from_level(int level) {
  switch (level) {
    case 0:
      return QubitPreparation::kGround;
    case 1:
      return QubitPreparation::kExcited;
    case 2:
      return QubitPreparation::kSecond;
    default:
      throw ValidationError("qubit level must be 0, 1 or 2", "level");
  }
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kQcSwap:
      return "QC_SWAP";
    case StepKind::kCrSwap:
      return "CR_SWAP";
    case StepKind::kLru:
      return "LRU";
  }
  return "?";
}

double reset_error(double p0) { return std::clamp(1.0 - p0, 0.0, 1.0); }

double reset_error(const std::vector<double> &marginal, double lost_norm) {
  if (marginal.empty()) throw ValidationError("empty marginal");
  return reset_error(marginal[0] + lost_norm);
}

double lru_resonance_frequency(const TransmonParams &qubit) {
  return qubit.frequency_ghz + qubit.anharmonicity_ghz;
}

namespace {

FrequencyMap dissipators_for(const SystemModel &system, const ProtocolOptions &options) {
  return options.dissipation ? resonator_dissipators(system) : FrequencyMap{};
}

double lost_norm(const QuantumState &s) {
  return std::max(0.0, 1.0 - s.amplitudes().squaredNorm());
}

std::vector<double> conditioned(std::vector<double> marginal, double norm_sq) {
  if (norm_sq > 0.0) {
    for (double &p : marginal) p /= norm_sq;
  }
  return marginal;
}

}  // namespace

ProtocolContext::ProtocolContext(const SystemModel &system, const ProtocolOptions &options,
                                 int max_sector)
    : system_(system),
      options_(options),
      propagator_(system, dissipators_for(system, options)),
      dressed_(system, max_sector) {}

QuantumState ProtocolContext::prepare(const std::vector<std::pair<std::string, int>> &levels,
                                      const std::string &superposed_mode) const {
  BasisState base(system_.num_modes(), 0);
  for (const auto &[name, n] : levels) base[system_.mode_index(name)] = n;
  if (superposed_mode.empty()) return dressed_.state(base);
  const std::size_t k = system_.mode_index(superposed_mode);
  BasisState one = base, two = base;
  one[k] = 1;
  two[k] = 2;
  return dressed_.superposition({{one, 1.0}, {two, 1.0}});
}

Trajectory ProtocolContext::run(const PulseSpec &schedule, const QuantumState &initial,
                                double duration_ns) const {
  return propagator_.run(schedule, initial, duration_ns, options_.propagate);
}

namespace {

QuantumState prepare_qubit(const ProtocolContext &context, const std::string &qubit,
                           QubitPreparation initial) {
  switch (initial) {
    case QubitPreparation::kGround:
      return context.prepare({{qubit, 0}});
    case QubitPreparation::kExcited:
      return context.prepare({{qubit, 1}});
    case QubitPreparation::kSecond:
      return context.prepare({{qubit, 2}});
    case QubitPreparation::kSuperposition:
      return context.prepare({}, qubit);
  }
  throw ValidationError("unknown preparation");
}

StepReport qubit_step(const ProtocolContext &context, const std::string &coupler,
                      const std::string &qubit, const PulseSpec &pulse, QubitPreparation initial) {
  const SystemModel &system = context.system();
  const std::size_t q = system.mode_index(qubit);
  const std::size_t c = system.mode_index(coupler);
  if (!system.tunable(c)) throw ValidationError("mode '" + coupler + "' is not tunable", "coupler");
  const double duration = pulse.duration();
  const Trajectory traj = context.run(pulse, prepare_qubit(context, qubit, initial), duration);
  StepReport r;
  r.initial = to_string(initial);
  r.qubit_marginal = context.dressed().marginal(traj.final_state, q);
  r.coupler_marginal = context.dressed().marginal(traj.final_state, c);
  r.norm = traj.final_state.norm();
  r.reset_error = reset_error(r.qubit_marginal, lost_norm(traj.final_state));
  r.duration_ns = duration;
  r.convergence_delta = std::isnan(traj.convergence_delta) ? 0.0 : traj.convergence_delta;
  return r;
}

}  // namespace

StepReport qc_swap(const ProtocolContext &context, const std::string &coupler,
                   const std::string &qubit, const PulseSpec &pulse, QubitPreparation initial) {
  StepReport r = qubit_step(context, coupler, qubit, pulse, initial);
  r.transfer = r.coupler_marginal.size() > 1 ? r.coupler_marginal[1] : 0.0;
  return r;
}

StepReport lru(const ProtocolContext &context, const std::string &coupler,
               const std::string &qubit, const PulseSpec &pulse, QubitPreparation initial) {
  StepReport r = qubit_step(context, coupler, qubit, pulse, initial);
  r.transfer = r.qubit_marginal.size() > 1 ? r.qubit_marginal[1] : 0.0;
  return r;
}

StepReport cr_swap(const ProtocolContext &context, const std::string &coupler,
                   const PulseSpec &pulse, int coupler_level) {
  const SystemModel &system = context.system();
  const std::size_t c = system.mode_index(coupler);
  if (!system.tunable(c)) throw ValidationError("mode '" + coupler + "' is not tunable", "coupler");
  const double duration = pulse.duration();
  const Trajectory traj = context.run(pulse, context.prepare({{coupler, coupler_level}}), duration);
  StepReport r;
  r.initial = "|" + std::to_string(coupler_level) + ">_c";
  r.coupler_marginal = context.dressed().marginal(traj.final_state, c);
  r.norm = traj.final_state.norm();
  r.reset_error = reset_error(r.coupler_marginal, lost_norm(traj.final_state));
  r.transfer = 1.0 - r.reset_error;
  r.duration_ns = duration;
  r.convergence_delta = std::isnan(traj.convergence_delta) ? 0.0 : traj.convergence_delta;
  return r;
}

double spectator_disturbance(const ProtocolContext &context, const PulseSpec &pulse,
                             const std::string &data_qubit, int data_level) {
  const std::size_t d = context.system().mode_index(data_qubit);
  const Trajectory traj =
      context.run(pulse, context.prepare({{data_qubit, data_level}}), pulse.duration());
  const double norm_sq = traj.final_state.amplitudes().squaredNorm();
  const auto m = conditioned(context.dressed().marginal(traj.final_state, d), norm_sq);
  return std::clamp(1.0 - m[static_cast<std::size_t>(data_level)], 0.0, 1.0);
}

const ResetEntry &ResetReport::entry(int ancilla_level, int data_level) const {
  for (const auto &e : entries) {
    if (e.ancilla_level == ancilla_level && e.data_level == data_level) return e;
  }
  throw ValidationError("report has no entry for the requested preparation");
}

double ResetReport::mean_ancilla_error() const {
  double s = 0.0;
  for (const auto &e : entries) s += e.ancilla_error;
  return entries.empty() ? 0.0 : s / static_cast<double>(entries.size());
}

double ResetReport::worst_ancilla_error(int ancilla_level) const {
  double w = 0.0;
  for (const auto &e : entries) {
    if (e.ancilla_level == ancilla_level) w = std::max(w, e.ancilla_error);
  }
  return w;
}

double ResetReport::worst_data_target(int data_level) const {
  double w = 1.0;
  for (const auto &e : entries) {
    if (e.data_level == data_level) w = std::min(w, e.data_target);
  }
  return w;
}

ResetReport full_reset(const ProtocolContext &context, const PulseSpec &sequence,
                       const std::string &ancilla, const std::string &data, double duration_ns) {
  const SystemModel &system = context.system();
  const std::size_t a = system.mode_index(ancilla);
  const std::size_t d = system.mode_index(data);
  if (system.kind(a) != ModeKind::kTransmon || system.kind(d) != ModeKind::kTransmon) {
    throw ValidationError("ancilla and data must be transmons");
  }
  if (system.levels(a) < 3 || system.levels(d) < 3) {
    throw ValidationError("ancilla and data need at least three levels", "levels");
  }
  const double duration = duration_ns < 0.0 ? sequence.duration() : duration_ns;

  ResetReport report;
  report.ancilla = ancilla;
  report.data = data;
  report.duration_ns = duration;
  std::vector<QuantumState> initial;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ResetEntry e;
      e.ancilla_level = i;
      e.data_level = j;
      e.label = "|" + std::to_string(i) + std::to_string(j) + ">";
      report.entries.push_back(e);
      initial.push_back(context.prepare({{ancilla, i}, {data, j}}));
    }
  }
  const auto trajectories =
      propagate_many(context.propagator(), sequence, initial, duration, context.options().propagate);
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    ResetEntry &e = report.entries[k];
    const QuantumState &s = trajectories[k].final_state;
    const double norm_sq = s.amplitudes().squaredNorm();
    e.norm = std::sqrt(norm_sq);
    e.ancilla_marginal = context.dressed().marginal(s, a);
    e.data_marginal = conditioned(context.dressed().marginal(s, d), norm_sq);
    e.ancilla_error = reset_error(e.ancilla_marginal, lost_norm(s));
    e.data_leakage = e.data_marginal[2];
    e.data_target = e.data_marginal[static_cast<std::size_t>(std::min(e.data_level, 1))];
    const double delta = trajectories[k].convergence_delta;
    e.convergence_delta = std::isnan(delta) ? 0.0 : delta;
  }
  return report;
}

PulseSpec without_channels(const PulseSpec &schedule, const std::vector<std::string> &channels) {
  PulseSpec out;
  for (const auto &s : schedule.segments()) {
    if (std::find(channels.begin(), channels.end(), s.channel) == channels.end()) out.add(s);
  }
  return out;
}

json report_to_json(const ResetReport &report) {
  json entries = json::array();
  for (const auto &e : report.entries) {
    entries.push_back({{"label", e.label},
                       {"ancilla_level", e.ancilla_level},
                       {"data_level", e.data_level},
                       {"ancilla_marginal", e.ancilla_marginal},
                       {"data_marginal", e.data_marginal},
                       {"ancilla_error", e.ancilla_error},
                       {"data_leakage", e.data_leakage},
                       {"data_target", e.data_target},
                       {"norm", e.norm},
                       {"convergence_delta", e.convergence_delta}});
  }
  return {{"ancilla", report.ancilla},
          {"data", report.data},
          {"duration_ns", report.duration_ns},
          {"mean_ancilla_error", report.mean_ancilla_error()},
          {"worst_ancilla_error_1", report.worst_ancilla_error(1)},
          {"worst_ancilla_error_2", report.worst_ancilla_error(2)},
          {"lru_transfer", report.worst_data_target(2)},
          {"data_one_preservation", report.worst_data_target(1)},
          {"entries", entries}};
}

std::string report_csv(const ResetReport &report) {
  std::ostringstream os;
  os << "ancilla\\data,0,1,2\n";
  for (int i = 0; i < 3; ++i) {
    os << i;
    for (int j = 0; j < 3; ++j) os << ',' << format_double(report.entry(i, j).ancilla_error);
    os << '\n';
  }
  return os.str();
}

}  // namespace resetlab

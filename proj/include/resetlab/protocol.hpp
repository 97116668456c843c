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

// Reset and leakage-reduction operations built from pulses and dynamics.
//
// States are prepared and read out in the dressed basis of the idle device
// (every coupler at its idle point), which is what a readout at idle sees.
// Norm lost through a resonator is an emitted photon: it is counted as
// ground for the qubit or coupler being reset, and the data-qubit marginals
// are conditioned on the remaining norm.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "resetlab/dynamics.hpp"
#include "resetlab/model.hpp"
#include "resetlab/pulses.hpp"

namespace resetlab {

/// |0>, |1>, |2> and (|1> + |2>)/sqrt 2.
enum class QubitPreparation { kGround, kExcited, kSecond, kSuperposition };
std::string to_string(QubitPreparation preparation);
QubitPreparation preparation_from_level(int level);

/// epsilon = 1 - p0, clamped to [0, 1].
double reset_error(double p0);
/// 1 - (marginal[0] + lost_norm), clamped to [0, 1].
double reset_error(const std::vector<double> &marginal, double lost_norm = 0.0);

/// Coupler frequency at which |2_q 0_c> and |1_q 1_c> are degenerate.
double lru_resonance_frequency(const TransmonParams &qubit);

enum class StepKind { kQcSwap, kCrSwap, kLru };
std::string to_string(StepKind kind);

struct ProtocolStep {
  StepKind kind = StepKind::kQcSwap;
  std::string coupler;
  PulseSpec pulse;
  std::vector<std::string> targets;
};

struct ProtocolOptions {
  PropagateOptions propagate;
  /// Apply every resonator's linewidth; false makes the evolution unitary.
  bool dissipation = true;
};

/// Propagator and idle dressed basis for repeated protocol runs on one
/// device. Immutable; safe to share between threads.
class ProtocolContext {
 public:
  ProtocolContext(const SystemModel &system, const ProtocolOptions &options = {},
                  int max_sector = 4);

  const SystemModel &system() const { return system_; }
  const ProtocolOptions &options() const { return options_; }
  const Propagator &propagator() const { return propagator_; }
  const DressedBasis &dressed() const { return dressed_; }

  /// Dressed product state: `levels` maps mode name to occupation, every
  /// other mode empty. A superposition preparation on one qubit is given by
  /// `superposed_mode`.
  QuantumState prepare(const std::vector<std::pair<std::string, int>> &levels,
                       const std::string &superposed_mode = {}) const;

  Trajectory run(const PulseSpec &schedule, const QuantumState &initial,
                 double duration_ns) const;

 private:
  SystemModel system_;
  ProtocolOptions options_;
  Propagator propagator_;
  DressedBasis dressed_;
};

struct StepReport {
  std::string initial;
  std::vector<double> qubit_marginal;    ///< empty for a CR swap
  std::vector<double> coupler_marginal;
  /// QC swap and LRU: 1 - P(qubit 0) - lost; CR swap: 1 - P(coupler 0) - lost.
  double reset_error = 0.0;
  /// QC swap: P(coupler 1); CR swap: 1 - P(coupler excited); LRU: P(qubit 1).
  double transfer = 0.0;
  double norm = 1.0;
  double duration_ns = 0.0;
  double convergence_delta = 0.0;
};

/// Swap of a qubit excitation into `coupler`.
StepReport qc_swap(const ProtocolContext &context, const std::string &coupler,
                   const std::string &qubit, const PulseSpec &pulse, QubitPreparation initial);

/// Release of a coupler excitation (`coupler_level` photons) into a lossy
/// resonator.
StepReport cr_swap(const ProtocolContext &context, const std::string &coupler,
                   const PulseSpec &pulse, int coupler_level = 1);

/// Leakage reduction of `qubit` through `coupler`.
StepReport lru(const ProtocolContext &context, const std::string &coupler,
               const std::string &qubit, const PulseSpec &pulse, QubitPreparation initial);

/// 1 - P(data stays in `data_level`) after `pulse`, with every other mode
/// (the ancilla included) starting empty.
double spectator_disturbance(const ProtocolContext &context, const PulseSpec &pulse,
                             const std::string &data_qubit, int data_level = 1);

struct ResetEntry {
  int ancilla_level = 0;
  int data_level = 0;
  std::string label;
  std::vector<double> ancilla_marginal;
  std::vector<double> data_marginal;  ///< conditioned on the remaining norm
  double ancilla_error = 0.0;
  /// P(data in |2>).
  double data_leakage = 0.0;
  /// P(data in min(initial, 1)): preservation for 0 and 1, LRU transfer for 2.
  double data_target = 0.0;
  double norm = 1.0;
  double convergence_delta = 0.0;
};

struct ResetReport {
  std::string ancilla;
  std::string data;
  double duration_ns = 0.0;
  std::vector<ResetEntry> entries;  ///< |a d>, ancilla-major

  const ResetEntry &entry(int ancilla_level, int data_level) const;
  double mean_ancilla_error() const;
  /// Largest ancilla error over data preparations, for one ancilla level.
  double worst_ancilla_error(int ancilla_level) const;
  /// Smallest P(data in |1>) over ancilla preparations, for one data level.
  double worst_data_target(int data_level) const;
};

/// All nine two-qubit preparations |a d>, a, d in {0, 1, 2}, run
/// concurrently through `sequence`. `duration_ns` < 0 uses the sequence
/// duration.
ResetReport full_reset(const ProtocolContext &context, const PulseSpec &sequence,
                       const std::string &ancilla, const std::string &data,
                       double duration_ns = -1.0);

/// Segments of `schedule` whose channel is not in `channels`.
PulseSpec without_channels(const PulseSpec &schedule, const std::vector<std::string> &channels);

nlohmann::json report_to_json(const ResetReport &report);
/// 3x3 matrix of ancilla errors, rows = ancilla level, columns = data level.
std::string report_csv(const ResetReport &report);

}  // namespace resetlab

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

// Device parameters, product basis, and the number-conserving RWA
// Hamiltonian of a transmon / tunable-coupler / resonator network.
//
// Units: every frequency handed in or out is linear (GHz), every time is in
// ns. Assembled operators are angular (rad/ns), i.e. multiplied by 2*pi, with
// hbar = 1. All mode energies are measured in a frame rotating at
// `reference_frame_ghz`, which removes the common carrier without changing
// any population (the Hamiltonian conserves total excitation number).

#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace resetlab {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct TransmonParams {
  double frequency_ghz = 0.0;
  double anharmonicity_ghz = 0.0;
  int levels = 3;
  /// Tunable transmons (couplers) are driven by pulses; `frequency_ghz` is
  /// then their idle point.
  bool tunable = false;
  // Stored for completeness, not used by the dynamics.
  double t1_us = 0.0;
  double t2_star_us = 0.0;
};

struct ResonatorParams {
  double frequency_ghz = 0.0;
  /// Energy decay rate kappa/2pi.
  double kappa_ghz = 0.0;
  int levels = 3;
  double dispersive_shift_ghz = 0.0;
};

enum class ModeKind { kTransmon, kResonator };

struct ModeSpec {
  std::string name;
  std::variant<TransmonParams, ResonatorParams> params;
};

struct Coupling {
  std::string mode_a;
  std::string mode_b;
  double g_ghz = 0.0;
};

/// Unvalidated device description as read from a config file.
struct DeviceDescription {
  std::vector<ModeSpec> modes;
  std::vector<Coupling> couplings;
  std::optional<double> frame_ghz;
};

/// Occupation number per mode, in the model's mode order.
using BasisState = std::vector<int>;

/// Map from mode name to a frequency in GHz.
using FrequencyMap = std::map<std::string, double, std::less<>>;

/// Validated, immutable device model with a fixed product basis.
///
/// Basis states are enumerated lexicographically in mode order with the last
/// mode varying fastest, so |0...0> has index 0.
class SystemModel {
 public:
  struct Link {
    std::size_t a;
    std::size_t b;
    double g_ghz;
  };

  std::size_t num_modes() const { return modes_.size(); }
  const std::vector<ModeSpec> &modes() const { return modes_; }
  const ModeSpec &mode(std::size_t i) const { return modes_.at(i); }
  const std::string &mode_name(std::size_t i) const { return modes_.at(i).name; }

  /// Throws ValidationError for an unknown name.
  std::size_t mode_index(std::string_view name) const;
  std::optional<std::size_t> find_mode(std::string_view name) const;

  ModeKind kind(std::size_t i) const;
  double frequency_ghz(std::size_t i) const;
  double anharmonicity_ghz(std::size_t i) const;
  int levels(std::size_t i) const { return levels_.at(i); }
  bool tunable(std::size_t i) const;
  double kappa_ghz(std::size_t i) const;
  std::vector<std::size_t> tunable_modes() const;

  const std::vector<Link> &links() const { return links_; }
  const std::vector<Coupling> &couplings() const { return couplings_; }
  double reference_frame_ghz() const { return frame_ghz_; }
  const std::vector<std::string> &warnings() const { return warnings_; }

  std::size_t dimension() const { return dimension_; }
  int max_excitation() const;

  std::size_t basis_index(const BasisState &occupations) const;
  BasisState basis_state(std::size_t index) const;
  int excitation(std::size_t index) const;
  /// Indices of every basis state with total occupation `n`, ascending.
  std::vector<std::size_t> sector_indices(int n) const;
  /// "|102>" style label; occupations are comma separated when any mode has
  /// more than ten levels.
  std::string label(const BasisState &occupations) const;
  std::string label(std::size_t index) const { return label(basis_state(index)); }

  /// Copy with a different rotating frame.
  SystemModel with_frame(double frame_ghz) const;
  /// Copy with every mode truncated to `levels`.
  SystemModel with_levels(int levels) const;
  /// Copy with one mode's idle frequency replaced.
  SystemModel with_frequency(std::string_view mode, double frequency_ghz) const;

  const DeviceDescription &description() const { return description_; }

 private:
  friend SystemModel build_system(const DeviceDescription &config);

  DeviceDescription description_;
  std::vector<ModeSpec> modes_;
  std::vector<Coupling> couplings_;
  std::vector<Link> links_;
  std::vector<int> levels_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 0;
  double frame_ghz_ = 0.0;
  std::vector<std::string> warnings_;
};

/// Validates a description and builds its basis. The default frame is the
/// frequency of the first fixed-frequency transmon (first mode otherwise).
SystemModel build_system(const DeviceDescription &config);

std::size_t basis_index(const SystemModel &system, const BasisState &occupations);
BasisState basis_state(const SystemModel &system, std::size_t index);

/// Idle frequency of every tunable mode.
FrequencyMap idle_frequencies(const SystemModel &system);

/// H_RWA in rad/ns over the full product basis. Every tunable mode must be
/// present in `coupler_frequencies`; entries for fixed modes are rejected.
SparseMatrix assemble_hamiltonian(const SystemModel &system,
                                  const FrequencyMap &coupler_frequencies);

struct ExcitationBlock {
  DenseMatrix matrix;
  std::vector<BasisState> labels;
  std::vector<std::size_t> indices;
};

/// Block of `h` restricted to total occupation `n`.
ExcitationBlock excitation_block(const SparseMatrix &h, const SystemModel &system, int n);

/// Decomposition of the (possibly non-Hermitian) Hamiltonian restricted to one
/// excitation sector, split so that time-dependent coupler frequencies only
/// touch a diagonal:
///
///   H(t) = fixed + sum_k 2*pi*offset_k(t) * diag(occupation[k]) - i*diag(loss)
///
/// with tunable modes held at their idle frequency inside `fixed`.
struct SectorHamiltonian {
  int excitation = 0;
  std::vector<std::size_t> indices;
  SparseMatrix fixed;
  std::vector<std::size_t> tunable;               ///< mode indices
  std::vector<Eigen::VectorXd> occupation;        ///< one per entry of `tunable`
  Eigen::VectorXd loss;                           ///< sum of (kappa/2)*n, rad/ns
};

/// `dissipators` maps resonator names to kappa/2pi in GHz.
SectorHamiltonian sector_hamiltonian(const SystemModel &system, int n,
                                     const FrequencyMap &dissipators = {});

/// Every resonator with kappa > 0, as a dissipator map.
FrequencyMap resonator_dissipators(const SystemModel &system);

}  // namespace resetlab

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

// State propagation and spectra.
//
// The Hamiltonian conserves total excitation number, so every sector is
// evolved on its own. Within a sector
//
//   H(t) = H_fixed + sum_k 2 pi offset_k(t) n_k - i sum_r (kappa_r / 2) 2 pi n_r
//
// and only the diagonal depends on time. Each step applies exact exponential
// actions (Taylor series summed to round-off, with sub-stepping to keep the
// series short). The default scheme is the fourth-order commutator-free
// Magnus integrator built on the two Gauss points of each step; the
// piecewise-constant midpoint scheme is kept for comparison.

#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "resetlab/model.hpp"
#include "resetlab/pulses.hpp"

namespace resetlab {

class QuantumState {
 public:
  QuantumState() = default;
  explicit QuantumState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {}

  /// The bare product state |occupations>.
  static QuantumState basis(const SystemModel &system, const BasisState &occupations);
  /// Normalized sum of bare states with the given (unnormalized) weights.
  static QuantumState superposition(const SystemModel &system,
                                    const std::vector<std::pair<BasisState, cplx>> &terms);

  const Eigen::VectorXcd &amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd &amplitudes() { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }

 private:
  Eigen::VectorXcd amplitudes_;
};

enum class Scheme { kMagnus4, kMidpoint };

struct PropagateOptions {
  double step_ns = 0.002;
  Scheme scheme = Scheme::kMagnus4;
  /// Re-run with half the step and require every final population to agree
  /// within `convergence_tolerance`.
  bool check_convergence = true;
  double convergence_tolerance = 1e-8;
  /// Spacing of recorded samples; 0 records only the start and the end.
  double record_interval_ns = 0.0;
};

struct Trajectory {
  std::vector<double> times_ns;
  /// Basis indices whose populations are recorded: every state in the
  /// excitation sectors the initial state occupies.
  std::vector<std::size_t> tracked;
  /// populations(i, j) = |<tracked[j]|psi(times[i])>|^2
  Eigen::MatrixXd populations;
  /// Euclidean norm of the state at each recorded time.
  std::vector<double> norms;
  QuantumState final_state;
  std::size_t steps = 0;
  /// Largest final-population change under step halving, NaN when unchecked.
  double convergence_delta = std::numeric_limits<double>::quiet_NaN();

  std::map<BasisState, double> populations_at(const SystemModel &system, std::size_t row) const;
};

/// Precomputed sector Hamiltonians for one system and dissipator set.
/// Immutable after construction; run() may be called concurrently.
class Propagator {
 public:
  explicit Propagator(const SystemModel &system, const FrequencyMap &dissipators = {});

  const SystemModel &system() const { return system_; }

  Trajectory run(const PulseSpec &schedule, const QuantumState &initial, double duration_ns,
                 const PropagateOptions &options = {}) const;

  /// Final state only, with no recording and no convergence check.
  QuantumState evolve(const PulseSpec &schedule, const QuantumState &initial, double duration_ns,
                      double step_ns = 0.002, Scheme scheme = Scheme::kMagnus4) const;

 private:
  struct Sector {
    SectorHamiltonian h;
    double fixed_norm = 0.0;  ///< max absolute row sum of h.fixed
  };

  void evolve_sector(const Sector &sector, const PulseSampler &sampler,
                     const std::vector<double> &grid, Scheme scheme, Eigen::VectorXcd &v) const;

  SystemModel system_;
  std::vector<Sector> sectors_;
};

Trajectory propagate(const SystemModel &system, const PulseSpec &schedule,
                     const QuantumState &initial, double duration_ns,
                     const FrequencyMap &dissipators = {}, const PropagateOptions &options = {});

/// Independent propagations of several initial states, run concurrently.
std::vector<Trajectory> propagate_many(const Propagator &propagator, const PulseSpec &schedule,
                                       const std::vector<QuantumState> &initial,
                                       double duration_ns, const PropagateOptions &options = {});

/// |amplitude|^2 for every basis state with nonzero amplitude.
std::map<BasisState, double> populations(const QuantumState &state, const SystemModel &system);

/// P(mode in level n) for n = 0 .. levels-1, summed over the other modes.
std::vector<double> marginal(const QuantumState &state, const SystemModel &system,
                             std::size_t mode);

/// Eigenstates of the Hermitian Hamiltonian at fixed coupler frequencies
/// (idle by default), each labeled with the bare state it overlaps most.
/// Labels are assigned greedily within each sector, largest overlap first,
/// and phases are fixed so that the overlap with the label is positive.
class DressedBasis {
 public:
  /// Only sectors up to `max_sector` are diagonalized (-1: all of them);
  /// states with weight above it are rejected.
  explicit DressedBasis(const SystemModel &system, int max_sector = -1);
  DressedBasis(const SystemModel &system, const FrequencyMap &coupler_frequencies,
               int max_sector = -1);

  QuantumState state(const BasisState &label) const;
  /// Normalized superposition of dressed states.
  QuantumState superposition(const std::vector<std::pair<BasisState, cplx>> &terms) const;
  /// |<dressed label|psi>|^2 indexed by the bare index of the label.
  Eigen::VectorXd populations(const QuantumState &state) const;
  /// Dressed populations summed per level of one mode.
  std::vector<double> marginal(const QuantumState &state, std::size_t mode) const;
  /// Overlap of a dressed state with its own bare label.
  double label_overlap(const BasisState &label) const;

 private:
  struct Block {
    std::vector<std::size_t> indices;  ///< bare indices of the sector
    DenseMatrix vectors;               ///< column j is the dressed state labeled indices[j]
  };
  const Block &block_of(std::size_t index) const;
  SystemModel system_;
  std::vector<Block> blocks_;
};

struct SpectrumCurve {
  std::string coupler;
  int excitation = 0;
  std::vector<double> frequencies_ghz;
  std::vector<BasisState> labels;
  /// energies_ghz(point, trace), lab-frame energies E / 2 pi.
  Eigen::MatrixXd energies_ghz;

  std::size_t trace(const BasisState &label) const;
};

/// Eigenvalues of sector `n` while `coupler` sweeps [lo, hi] (other couplers
/// idle). Traces take their label from the bare state of largest overlap at
/// the first point and then follow maximum-overlap continuity.
SpectrumCurve spectrum_scan(const SystemModel &system, const std::string &coupler, double lo_ghz,
                            double hi_ghz, int points, int n);

struct AvoidedCrossing {
  double location_ghz = 0.0;
  double gap_ghz = 0.0;
  /// The smallest separation sits at an end of the scan range.
  bool at_boundary = false;
  std::size_t index = 0;
};

/// Minimum separation between two traces, refined by a parabola through the
/// three samples around the minimum. A sign change of E_a - E_b is reported
/// as an exact crossing with zero gap.
AvoidedCrossing avoided_crossing(const SpectrumCurve &curve, const BasisState &a,
                                 const BasisState &b);

std::string spectrum_csv(const SpectrumCurve &curve, const SystemModel &system);
std::string trajectory_csv(const Trajectory &trajectory, const SystemModel &system);

}  // namespace resetlab

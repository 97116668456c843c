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

// Coupler-frequency trajectories.
//
// A pulse is a list of segments, each placed on one coupler channel at a start
// time. Sampling returns the offset of every channel from its idle frequency,
// in GHz; outside all segments a channel sits at idle (offset 0).
//
// The adiabatic shape follows the detuning trajectory
//
//   Delta(t) = -8 g u / sqrt(1 - 16 u^2),   u = beta g t + delta
//
// which saturates |dDelta/dt| = beta (Delta^2 + 4 g^2)^{3/2} / g at every
// instant. Detunings are qubit minus coupler, so the coupler sits at
// omega_q - Delta(t).

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "resetlab/model.hpp"

namespace resetlab {

struct AdiabaticPulseParams {
  double tau_ns = 0.0;
  double f0_ghz = 0.0;     ///< Delta(0)
  double f_tau_ghz = 0.0;  ///< Delta(tau)
  double g_ghz = 0.0;
};

struct AdiabaticCoefficients {
  double beta = 0.0;   ///< dimensionless rate prefactor
  double delta = 0.0;  ///< u(0)
};

/// Throws InvalidPulseError for tau <= 0, g <= 0, both endpoints zero, or a
/// trajectory that leaves the square-root domain inside [0, tau].
AdiabaticCoefficients adiabatic_coefficients(const AdiabaticPulseParams &p);

/// Delta(t) in GHz for 0 <= t <= tau.
double adiabatic_detuning(const AdiabaticPulseParams &p, double t_ns);

/// Time at which Delta crosses zero, -delta / (beta g). May lie outside
/// [0, tau] when both endpoints have the same sign.
double adiabatic_zero_crossing(const AdiabaticPulseParams &p);

/// Constant offset `amplitude` for `duration`. Nonzero `edge_ns` replaces
/// the hard edges with raised-cosine rise and fall of that length, taken
/// from inside the window.
struct SquareShape {
  double amplitude_ghz = 0.0;
  double duration_ns = 0.0;
  double edge_ns = 0.0;
};

struct RampShape {
  double start_ghz = 0.0;
  double end_ghz = 0.0;
  double duration_ns = 0.0;
};

/// Offset = detuning_origin - Delta(t), where detuning_origin is
/// omega_q - omega_c,idle for the targeted qubit-coupler pair.
struct AdiabaticShape {
  AdiabaticPulseParams params;
  double detuning_origin_ghz = 0.0;
};

using Shape = std::variant<SquareShape, RampShape, AdiabaticShape>;

double shape_duration(const Shape &shape);
/// Offset at local time t (0 = segment start); 0 outside [0, duration).
double shape_offset(const Shape &shape, double t_local);
/// Local times at which the shape or its derivative jumps.
std::vector<double> shape_breakpoints(const Shape &shape);

struct Segment {
  std::string channel;
  double start_ns = 0.0;
  Shape shape;
};

/// A schedule across coupler channels. A single-shape pulse is just a
/// schedule with one segment.
class PulseSpec {
 public:
  PulseSpec() = default;
  explicit PulseSpec(std::vector<Segment> segments);

  static PulseSpec single(std::string channel, Shape shape, double start_ns = 0.0);

  /// Appends a segment; throws ValidationError when it overlaps another
  /// segment on the same channel.
  PulseSpec &add(Segment segment);
  /// Appends every segment of `other` shifted by `offset_ns`.
  PulseSpec &append(const PulseSpec &other, double offset_ns = 0.0);

  const std::vector<Segment> &segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  /// max over segments of start + duration.
  double duration() const;
  /// Channels in order of first appearance.
  std::vector<std::string> channels() const;
  /// Sorted, de-duplicated absolute times where the schedule is not smooth.
  std::vector<double> breakpoints() const;

 private:
  std::vector<Segment> segments_;
};

/// Offset of every channel appearing in the schedule at time t.
FrequencyMap sample_pulse(const PulseSpec &spec, double t_ns);

/// Offset of one channel at time t.
double sample_channel(const PulseSpec &spec, std::string_view channel, double t_ns);

/// Absolute coupler frequencies at time t: idle + offset for every tunable
/// mode. Throws ValidationError when the schedule targets a mode that is
/// unknown or not tunable.
FrequencyMap coupler_frequencies(const SystemModel &system, const PulseSpec &spec, double t_ns);

/// Validates channel names against `system`.
void check_channels(const SystemModel &system, const PulseSpec &spec);

/// Schedule samplers resolved to the tunable-mode order of a system, for
/// the integrator's inner loop.
class PulseSampler {
 public:
  PulseSampler(const SystemModel &system, const PulseSpec &spec);
  std::size_t size() const { return per_mode_.size(); }
  /// Writes one offset per tunable mode (system.tunable_modes() order).
  void offsets(double t_ns, double *out) const;

 private:
  struct Placed {
    double start;
    double end;
    Shape shape;
  };
  std::vector<std::vector<Placed>> per_mode_;
};

struct AdiabaticityProfile {
  std::vector<double> times_ns;
  std::vector<double> ratio;  ///< |<n|dH/dt|m>| / |E_n - E_m|^2 per sample
  double max_ratio = 0.0;
  double time_of_max_ns = 0.0;
};

struct AdiabaticityOptions {
  int samples = 200;
  /// Excitation sector to diagonalize; -1 uses the full Hilbert space.
  int sector = -1;
  /// Start/stop of the sampled window; stop < 0 means the pulse duration.
  double t_start_ns = 0.0;
  double t_stop_ns = -1.0;
  /// Finite-difference step for dH/dt.
  double fd_step_ns = 1e-4;
};

/// Adiabaticity ratio between two instantaneous eigenstates along the pulse.
/// `pair` names bare basis states; the eigenstates they label at the first
/// sample are followed by maximum-overlap continuity. Samples sit at interval
/// midpoints so that jumps at the window ends are never differentiated.
/// Throws ConvergenceError when the gap closes below 1e-12 rad/ns.
AdiabaticityProfile adiabaticity_profile(const SystemModel &system, const PulseSpec &spec,
                                         const BasisState &state_a, const BasisState &state_b,
                                         const AdiabaticityOptions &options = {});

double adiabaticity_metric(const SystemModel &system, const PulseSpec &spec,
                           const BasisState &state_a, const BasisState &state_b,
                           int samples = 200);

/// {"channel", "start_ns", "shape", "params"} per segment.
nlohmann::json pulse_to_json(const PulseSpec &spec);
PulseSpec pulse_from_json(const nlohmann::json &doc, const std::string &where = "pulses");

/// CSV with t_ns followed by one offset column per channel.
std::string pulse_csv(const PulseSpec &spec, double sample_rate_gsps);

}  // namespace resetlab

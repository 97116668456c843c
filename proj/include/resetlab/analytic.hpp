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

// Closed-form results for the two-level pieces of the reset protocol.
//
// Frequencies are linear (GHz) and times are ns unless a name says
// otherwise.
//
// Damped coupler-resonator swap. At resonance the coupler amplitude obeys
//
//   i d/dt (psi_c, psi_r) = 2 pi [[0, g], [g, -i kappa]] (psi_c, psi_r)
//
// where kappa is the decay rate of the resonator *amplitude*; the resonator
// energy decays at 2 kappa, which is the linewidth to hand to the
// propagator. The discriminant kappa^2 - 4 g^2 separates the under-damped,
// critically damped (kappa = 2 g) and over-damped regimes.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace resetlab {

/// (P_qubit, P_coupler) = (cos^2(2 pi g t), sin^2(2 pi g t)).
std::pair<double, double> rabi_population(double g_ghz, double t_ns);

enum class DampingRegime { kUnderDamped, kCritical, kOverDamped };

struct DampingClass {
  /// (2 pi)^2 (kappa^2 - 4 g^2), rad^2/ns^2.
  double discriminant = 0.0;
  DampingRegime regime = DampingRegime::kUnderDamped;
};

/// Critical when |kappa - 2 g| <= tolerance_ghz.
DampingClass classify_damping(double g_cr_ghz, double kappa_ghz, double tolerance_ghz = 1e-12);
std::string to_string(DampingRegime regime);

/// psi_c(t) for psi_c(0) = 1, psi_r(0) = 0. Real at resonance. Smooth in
/// kappa through the critical point.
double damped_coupler_amplitude(double g_cr_ghz, double kappa_ghz, double t_ns);
/// |psi_c(t)|^2.
double damped_coupler_population(double g_cr_ghz, double kappa_ghz, double t_ns);

/// Resonator energy linewidth that reproduces the damped model in a
/// propagator with -i (kappa_E / 2) a^dag a loss.
inline double propagator_linewidth(double kappa_ghz) { return 2.0 * kappa_ghz; }

/// Exact asymptotic decay rate of |psi_c|^2 (1/ns).
double asymptotic_decay_rate(double g_cr_ghz, double kappa_ghz);

/// Decay rate of |psi_c|^2 estimated from samples: the upper envelope
/// (running maximum from the right) is fit by a straight line in log scale
/// over the second half of [0, horizon_ns].
double fitted_decay_rate(double g_cr_ghz, double kappa_ghz, double horizon_ns, int samples = 4000);

/// kappa / g_cr of the fastest decay.
double fastest_decay_ratio();

struct DecayScan {
  std::vector<double> ratios;  ///< kappa / g_cr
  std::vector<double> rates;   ///< fitted decay rate, 1/ns
  std::size_t best_index = 0;
  double best_ratio = 0.0;
};

/// Fitted rates over `points` ratios evenly spaced in [lo, hi], horizon
/// `horizon_periods / g_cr`.
DecayScan decay_rate_scan(double g_cr_ghz, double ratio_lo = 0.5, double ratio_hi = 4.0,
                          int points = 36, double horizon_periods = 20.0);

/// Earliest time after which |psi_c|^2 stays below `threshold`, resolved to
/// `resolution_ns`.
double threshold_time(double g_cr_ghz, double kappa_ghz, double threshold,
                      double resolution_ns = 1e-3);

struct LzParams {
  double g_rad_per_ns = 0.0;
  double sweep_rate_rad_per_ns2 = 0.0;
};

/// exp(-2 pi g^2 / alpha): probability of staying on the diabatic level.
double lz_transition_probability(const LzParams &params);

enum class RateConvention { kAngular, kCyclic };
std::string to_string(RateConvention convention);

struct ResetTime {
  double ns = 0.0;
  RateConvention convention = RateConvention::kAngular;
};

/// Sum of 1/rate over the three rates, with rates in GHz. The angular
/// convention reads each rate as x/2pi and returns sum 1/(2 pi x); the
/// cyclic one returns sum 1/x.
ResetTime total_reset_time(double omega_r_ghz, double omega_q_ghz, double kappa_ghz,
                           RateConvention convention);

struct CouplerBudget {
  long data_qubits = 0;
  long ancilla_qubits = 0;
  long couplers_available = 0;  ///< 4 d (d - 1)
  long couplers_required = 0;   ///< 3 d^2 - 1
  bool feasible = false;
};

CouplerBudget surface_code_coupler_budget(int distance);

}  // namespace resetlab

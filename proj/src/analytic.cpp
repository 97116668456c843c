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

#include "resetlab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "resetlab/error.hpp"
#include "resetlab/model.hpp"

namespace resetlab {

std::pair<double, double> rabi_population(double g_ghz, double t_ns) {
  const double c = std::cos(kTwoPi * g_ghz * t_ns);
  const double s = std::sin(kTwoPi * g_ghz * t_ns);
  return {c * c, s * s};
}

DampingClass classify_damping(double g_cr_ghz, double kappa_ghz, double tolerance_ghz) {
  DampingClass out;
  out.discriminant = kTwoPi * kTwoPi * (kappa_ghz * kappa_ghz - 4.0 * g_cr_ghz * g_cr_ghz);
  if (std::abs(kappa_ghz - 2.0 * g_cr_ghz) <= tolerance_ghz) {
    out.regime = DampingRegime::kCritical;
  } else if (out.discriminant < 0.0) {
    out.regime = DampingRegime::kUnderDamped;
  } else {
    out.regime = DampingRegime::kOverDamped;
  }
  return out;
}

std::string to_string(DampingRegime regime) {
  switch (regime) {
    case DampingRegime::kUnderDamped:
      return "under-damped";
    case DampingRegime::kCritical:
      return "critically damped";
    case DampingRegime::kOverDamped:
      return "over-damped";
  }
  return "unknown";
}

double damped_coupler_amplitude(double g_cr_ghz, double kappa_ghz, double t_ns) {
  if (!(g_cr_ghz > 0.0)) throw ValidationError("g_cr must be positive", "g_cr_ghz");
  if (kappa_ghz < 0.0) throw ValidationError("kappa must be non-negative", "kappa_ghz");
  if (t_ns < 0.0) throw ValidationError("time must be non-negative", "t_ns");
  const double big_g = kTwoPi * g_cr_ghz;
  const double half_k = 0.5 * kTwoPi * kappa_ghz;
  // psi_c'' + 2 half_k psi_c' + G^2 psi_c = 0, psi_c(0) = 1, psi_c'(0) = 0:
  //   psi_c = exp(-half_k t) [C(t) + half_k S(t)]
  // with C = cos(w t), S = sin(w t) / w, w^2 = G^2 - half_k^2.
  const double w2 = big_g * big_g - half_k * half_k;
  const double x = w2 * t_ns * t_ns;
  if (std::abs(x) < 1e-2) {
    // Power series in x; continuous through w2 = 0.
    double c = 0.0, s = 0.0, term_c = 1.0, term_s = 1.0;
    for (int n = 0; n < 12; ++n) {
      c += term_c;
      s += term_s;
      term_c *= -x / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
      term_s *= -x / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
    }
    return std::exp(-half_k * t_ns) * (c + half_k * t_ns * s);
  }
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    return std::exp(-half_k * t_ns) *
           (std::cos(w * t_ns) + half_k * std::sin(w * t_ns) / w);
  }
  const double lam = std::sqrt(-w2);
  // cosh and sinh folded into the exponential to avoid overflow.
  const double slow = std::exp((lam - half_k) * t_ns);
  const double fast = std::exp((-lam - half_k) * t_ns);
  return 0.5 * (slow + fast) + half_k * 0.5 * (slow - fast) / lam;
}

double damped_coupler_population(double g_cr_ghz, double kappa_ghz, double t_ns) {
  const double a = damped_coupler_amplitude(g_cr_ghz, kappa_ghz, t_ns);
  return a * a;
}

double asymptotic_decay_rate(double g_cr_ghz, double kappa_ghz) {
  const double big_g = kTwoPi * g_cr_ghz;
  const double half_k = 0.5 * kTwoPi * kappa_ghz;
  const double w2 = big_g * big_g - half_k * half_k;
  if (w2 >= 0.0) return 2.0 * half_k;
  return 2.0 * (half_k - std::sqrt(-w2));
}

double fitted_decay_rate(double g_cr_ghz, double kappa_ghz, double horizon_ns, int samples) {
  if (samples < 8) throw ValidationError("too few samples", "samples");
  if (!(horizon_ns > 0.0)) throw ValidationError("horizon must be positive", "horizon_ns");
  std::vector<double> t(static_cast<std::size_t>(samples) + 1);
  std::vector<double> env(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = horizon_ns * static_cast<double>(i) / samples;
    env[i] = damped_coupler_population(g_cr_ghz, kappa_ghz, t[i]);
  }
  for (std::size_t i = env.size() - 1; i-- > 0;) env[i] = std::max(env[i], env[i + 1]);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = t.size() / 2; i < t.size(); ++i) {
    if (!(env[i] > std::numeric_limits<double>::min())) continue;
    const double y = std::log(env[i]);
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

double fastest_decay_ratio() { return 2.0; }

DecayScan decay_rate_scan(double g_cr_ghz, double ratio_lo, double ratio_hi, int points,
                          double horizon_periods) {
  if (points < 2) throw ValidationError("a scan needs at least two points", "points");
  DecayScan out;
  const double horizon = horizon_periods / g_cr_ghz;
  for (int i = 0; i < points; ++i) {
    const double r = ratio_lo + (ratio_hi - ratio_lo) * i / (points - 1);
    out.ratios.push_back(r);
    out.rates.push_back(fitted_decay_rate(g_cr_ghz, r * g_cr_ghz, horizon));
  }
  out.best_index = static_cast<std::size_t>(
      std::max_element(out.rates.begin(), out.rates.end()) - out.rates.begin());
  out.best_ratio = out.ratios[out.best_index];
  return out;
}

double threshold_time(double g_cr_ghz, double kappa_ghz, double threshold, double resolution_ns) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)", "threshold");
  }
  const double rate = asymptotic_decay_rate(g_cr_ghz, kappa_ghz);
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  // The amplitude prefactor is bounded by 1 + kappa / (2 Lambda) in the
  // over-damped case; a generous horizon covers it.
  const double horizon = (std::log(1.0 / threshold) + 60.0) / rate;
  const auto n = static_cast<long>(std::ceil(horizon / resolution_ns));
  double last_above = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * resolution_ns;
    if (damped_coupler_population(g_cr_ghz, kappa_ghz, t) >= threshold) last_above = t;
  }
  return last_above + resolution_ns;
}

double lz_transition_probability(const LzParams &params) {
  if (!(params.sweep_rate_rad_per_ns2 > 0.0)) {
    throw ValidationError("sweep rate must be positive", "sweep_rate_rad_per_ns2");
  }
  const double g = params.g_rad_per_ns;
  return std::exp(-kTwoPi * g * g / params.sweep_rate_rad_per_ns2);
}

std::string to_string(RateConvention convention) {
  return convention == RateConvention::kAngular ? "angular" : "cyclic";
}

ResetTime total_reset_time(double omega_r_ghz, double omega_q_ghz, double kappa_ghz,
                           RateConvention convention) {
  if (!(omega_r_ghz > 0.0 && omega_q_ghz > 0.0 && kappa_ghz > 0.0)) {
    throw ValidationError("rates must be positive");
  }
  const double scale = convention == RateConvention::kAngular ? kTwoPi : 1.0;
  ResetTime out;
  out.convention = convention;
  out.ns = 1.0 / (scale * omega_r_ghz) + 1.0 / (scale * omega_q_ghz) + 1.0 / (scale * kappa_ghz);
  return out;
}

CouplerBudget surface_code_coupler_budget(int distance) {
  if (distance < 2) throw ValidationError("code distance must be at least 2", "d");
  const long d = distance;
  CouplerBudget b;
  b.data_qubits = d * d;
  b.ancilla_qubits = d * d - 1;
  b.couplers_available = 4 * d * (d - 1);
  b.couplers_required = 3 * d * d - 1;
  b.feasible = b.couplers_available >= b.couplers_required;
  return b;
}

}  // namespace resetlab

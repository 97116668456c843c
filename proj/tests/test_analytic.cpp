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

#include <cmath>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "resetlab/analytic.hpp"
#include "resetlab/device_config.hpp"
#include "resetlab/dynamics.hpp"
#include "resetlab/error.hpp"

namespace resetlab {
namespace {

// |psi_c(t)|^2 from the 2x2 non-Hermitian generator [[0, G], [G, -i K]].
double expm_population(double g, double kappa, double t) {
  Eigen::Matrix2cd h;
  h << 0.0, oracle::kTwoPi * g, oracle::kTwoPi * g, cplx(0.0, -oracle::kTwoPi * kappa);
  const Eigen::Matrix2cd u = (cplx(0.0, -t) * h).exp();
  return std::norm(u(0, 0));
}

SystemModel coupler_resonator(double g) {
  return build_system(parse_device_description(R"({
    "modes": [
      {"name": "C", "kind": "transmon", "frequency_ghz": 6.75, "anharmonicity_ghz": -0.15,
       "levels": 2, "tunable": true},
      {"name": "R", "kind": "resonator", "frequency_ghz": 6.75, "levels": 2}],
    "couplings": [{"a": "C", "b": "R", "g_ghz": )" + std::to_string(g) + "}]}"));
}

TEST(Analytic, RabiPopulations) {
  const auto [q0, c0] = rabi_population(0.047, 0.0);
  EXPECT_DOUBLE_EQ(q0, 1.0);
  EXPECT_DOUBLE_EQ(c0, 0.0);
  const auto [q, c] = rabi_population(0.047, 1.0 / (4.0 * 0.047));
  EXPECT_NEAR(q, 0.0, 1e-15);
  EXPECT_NEAR(c, 1.0, 1e-15);
  for (double t = 0.0; t < 30.0; t += 0.37) {
    const auto [a, b] = rabi_population(0.05, t);
    EXPECT_NEAR(a + b, 1.0, 1e-15);
  }
}

TEST(Analytic, DampingRegimes) {
  EXPECT_EQ(classify_damping(0.05, 0.05).regime, DampingRegime::kUnderDamped);
  EXPECT_EQ(classify_damping(0.05, 0.1).regime, DampingRegime::kCritical);
  EXPECT_EQ(classify_damping(0.05, 0.2).regime, DampingRegime::kOverDamped);
  EXPECT_LT(classify_damping(0.05, 0.05).discriminant, 0.0);
  EXPECT_GT(classify_damping(0.05, 0.2).discriminant, 0.0);
  EXPECT_EQ(to_string(DampingRegime::kCritical), "critically damped");
  EXPECT_DOUBLE_EQ(fastest_decay_ratio(), 2.0);
  EXPECT_DOUBLE_EQ(propagator_linewidth(0.1), 0.2);
}

TEST(Analytic, ClosedFormMatchesExponentialOracle) {
  const double g = 0.05;
  for (double ratio : {0.5, 1.0, 2.0, 3.0, 6.0}) {
    for (int i = 0; i < 40; ++i) {
      const double t = 1.0 * i;
      EXPECT_NEAR(damped_coupler_population(g, ratio * g, t), expm_population(g, ratio * g, t), 1e-12)
          << ratio << " " << t;
    }
  }
}

TEST(Analytic, ClosedFormMatchesPropagation) {
  const double g = 0.05;
  const SystemModel s = coupler_resonator(g);
  PropagateOptions o;
  o.step_ns = 0.01;
  o.record_interval_ns = 1.0;
  o.check_convergence = false;
  const std::size_t ic = s.basis_index({1, 0});
  for (double ratio : {0.5, 1.0, 2.0, 3.0, 6.0}) {
    const double kappa = ratio * g;
    const auto traj = propagate(s, {}, QuantumState::basis(s, {1, 0}), 39.0,
                                {{"R", propagator_linewidth(kappa)}}, o);
    const auto col = std::find(traj.tracked.begin(), traj.tracked.end(), ic) - traj.tracked.begin();
    ASSERT_EQ(traj.times_ns.size(), 40u);
    for (std::size_t r = 0; r < traj.times_ns.size(); ++r) {
      EXPECT_NEAR(traj.populations(long(r), col),
                  damped_coupler_population(g, kappa, traj.times_ns[r]), 1e-6);
    }
  }
}

TEST(Analytic, ContinuousAcrossCriticalPoint) {
  const double g = 0.05;
  for (double t : {0.5, 3.0, 10.0, 25.0, 60.0}) {
    const double c = damped_coupler_amplitude(g, 2.0 * g, t);
    // Larger steps than 1e-9 move the curve physically by more than 1e-8.
    for (double eps : {1e-12, 1e-10, 1e-9}) {
      EXPECT_NEAR(damped_coupler_amplitude(g, 2.0 * g * (1.0 + eps), t), c, 1e-8);
      EXPECT_NEAR(damped_coupler_amplitude(g, 2.0 * g * (1.0 - eps), t), c, 1e-8);
    }
    // Critical closed form: (1 + K t / 2) exp(-K t / 2), K = 2 pi kappa.
    const double half_k = 0.5 * kTwoPi * 2.0 * g;
    EXPECT_NEAR(c, (1.0 + half_k * t) * std::exp(-half_k * t), 1e-12);
  }
}

TEST(Analytic, DampedAmplitudeValidation) {
  EXPECT_THROW(damped_coupler_amplitude(0.0, 0.1, 1.0), ValidationError);
  EXPECT_THROW(damped_coupler_amplitude(0.05, -0.1, 1.0), ValidationError);
  EXPECT_THROW(damped_coupler_amplitude(0.05, 0.1, -1.0), ValidationError);
  EXPECT_DOUBLE_EQ(damped_coupler_amplitude(0.05, 0.1, 0.0), 1.0);
}

TEST(Analytic, CriticalDampingIsFastest) {
  const DecayScan scan = decay_rate_scan(0.05);
  ASSERT_EQ(scan.ratios.size(), 36u);
  // Grid spacing is 0.1, so 2.0 sits at index 15.
  EXPECT_LE(std::abs(static_cast<long>(scan.best_index) - 15), 2);
  EXPECT_NEAR(scan.best_ratio, 2.0, 0.2);
  const double t_crit = threshold_time(0.05, 0.1, 1e-3);
  const double t_over = threshold_time(0.05, 0.5, 1e-3);
  EXPECT_GT(t_over, t_crit);
  EXPECT_GT(asymptotic_decay_rate(0.05, 0.1), asymptotic_decay_rate(0.05, 0.5));
  EXPECT_GT(asymptotic_decay_rate(0.05, 0.1), asymptotic_decay_rate(0.05, 0.05));
}

TEST(Analytic, ThresholdTimeBracketsCrossing) {
  const double t = threshold_time(0.05, 0.1, 1e-3, 1e-3);
  EXPECT_LT(damped_coupler_population(0.05, 0.1, t), 1e-3);
  EXPECT_GE(damped_coupler_population(0.05, 0.1, t - 1e-3), 1e-3);
}

TEST(Analytic, LandauZenerFormula) {
  EXPECT_NEAR(lz_transition_probability({1.0, kTwoPi}), std::exp(-1.0), 1e-15);
  EXPECT_THROW(lz_transition_probability({1.0, 0.0}), ValidationError);
}

TEST(Analytic, LandauZenerMatchesSweep) {
  // H = [[a t / 2, g], [g, -a t / 2]] from -T/2 to T/2; survival in the
  // diabatic state equals exp(-2 pi g^2 / a).
  const double g = 0.3;  // rad/ns
  for (double p_target : {0.1, 0.5, 0.9}) {
    const double a = -kTwoPi * g * g / std::log(p_target);
    const double span = 400.0 * g / a;
    auto h = [&](double t) {
      oracle::Mat m(2, 2);
      const double x = 0.5 * a * (t - 0.5 * span);
      m << x, g, g, -x;
      return m;
    };
    const oracle::Vec out = oracle::evolve_sampled(h, oracle::basis(2, 0), span, 40000);
    EXPECT_NEAR(std::norm(out(0)), lz_transition_probability({g, a}), 2e-2);
  }
}

TEST(Analytic, TotalResetTime) {
  const ResetTime ang = total_reset_time(0.010, 0.060, 0.010, RateConvention::kAngular);
  EXPECT_NEAR(ang.ns, 34.48, 5e-3);
  const ResetTime cyc = total_reset_time(0.010, 0.060, 0.010, RateConvention::kCyclic);
  EXPECT_NEAR(cyc.ns, 216.67, 5e-3);
  EXPECT_EQ(to_string(cyc.convention), "cyclic");
  EXPECT_THROW(total_reset_time(0.0, 0.06, 0.01, RateConvention::kAngular), ValidationError);
}

TEST(Analytic, CouplerBudget) {
  const CouplerBudget d3 = surface_code_coupler_budget(3);
  EXPECT_EQ(d3.couplers_available, 24);
  EXPECT_EQ(d3.couplers_required, 26);
  EXPECT_FALSE(d3.feasible);
  EXPECT_EQ(d3.data_qubits, 9);
  EXPECT_EQ(d3.ancilla_qubits, 8);
  for (int d = 4; d <= 25; ++d) {
    const CouplerBudget b = surface_code_coupler_budget(d);
    EXPECT_TRUE(b.feasible) << d;
    EXPECT_EQ(b.couplers_available - b.couplers_required, long(d) * d - 4L * d + 1) << d;
  }
  EXPECT_THROW(surface_code_coupler_budget(1), ValidationError);
}

}  // namespace
}  // namespace resetlab

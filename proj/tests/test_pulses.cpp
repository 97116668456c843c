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
#include <random>

#include <gtest/gtest.h>

#include "resetlab/device_config.hpp"
#include "resetlab/error.hpp"
#include "resetlab/pulses.hpp"

namespace resetlab {
namespace {

// Closed-form trajectory written out with the expanded square root and the
// beta written out directly, independent of the library's u-substitution.
double reference_detuning(const AdiabaticPulseParams &p, double t) {
  const double g = p.g_ghz, f = p.f_tau_ghz;
  const double delta = -p.f0_ghz / std::sqrt(16.0 * p.f0_ghz * p.f0_ghz + 64.0 * g * g);
  const double w = f * f + 4.0 * g * g;
  const double beta = (-4.0 * delta * w - f * std::sqrt(w)) / (4.0 * g * p.tau_ns * w);
  const double bgt = beta * g * t;
  return -8.0 * g * (bgt + delta) /
         std::sqrt(1.0 - 16.0 * bgt * bgt - 32.0 * beta * delta * g * t - 16.0 * delta * delta);
}

AdiabaticPulseParams random_params(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> tau(2.0, 120.0), g(0.005, 0.3), f0(-2.5, -0.02),
      ft(-2.5, 2.5);
  AdiabaticPulseParams p{tau(rng), f0(rng), ft(rng), g(rng)};
  return p;
}

SystemModel two_level(double g) {
  return build_system(parse_device_description(R"({
    "modes": [
      {"name": "Q", "kind": "transmon", "frequency_ghz": 5.0, "anharmonicity_ghz": -0.25,
       "levels": 2},
      {"name": "C", "kind": "transmon", "frequency_ghz": 6.0, "anharmonicity_ghz": -0.15,
       "levels": 2, "tunable": true}],
    "couplings": [{"a": "Q", "b": "C", "g_ghz": )" + std::to_string(g) + "}]}"));
}

TEST(Pulses, AdiabaticBoundariesExact) {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 200; ++i) {
    const AdiabaticPulseParams p = random_params(rng);
    EXPECT_NEAR(adiabatic_detuning(p, 0.0), p.f0_ghz, 1e-9 * std::abs(p.f0_ghz));
    EXPECT_NEAR(adiabatic_detuning(p, p.tau_ns), p.f_tau_ghz,
                1e-9 * std::max(std::abs(p.f_tau_ghz), 1e-3));
  }
}

TEST(Pulses, StartsAtF0) {
  for (double g : {0.02, 0.05, 0.1, 0.3}) {
    const AdiabaticPulseParams p{100.0, -1.5, -1.0, g};
    EXPECT_NEAR(adiabatic_detuning(p, 0.0), -1.5, 1e-12);
    EXPECT_NEAR(adiabatic_detuning(p, 100.0), -1.0, 1e-12);
  }
}

TEST(Pulses, AdiabaticMatchesExpandedForm) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const AdiabaticPulseParams p = random_params(rng);
    for (double s : {0.1, 0.37, 0.5, 0.81}) {
      const double t = s * p.tau_ns;
      const double ref = reference_detuning(p, t);
      EXPECT_NEAR(adiabatic_detuning(p, t), ref, 1e-9 * std::max(std::abs(ref), 1e-3));
    }
  }
}

TEST(Pulses, AdiabaticSatisfiesRateEquation) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const AdiabaticPulseParams p = random_params(rng);
    const AdiabaticCoefficients c = adiabatic_coefficients(p);
    const double h = 1e-3 * p.tau_ns;
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double t = s * p.tau_ns;
      const double fd = (adiabatic_detuning(p, t + h) - adiabatic_detuning(p, t - h)) / (2.0 * h);
      const double d = adiabatic_detuning(p, t);
      const double rhs =
          std::abs(c.beta) * std::pow(d * d + 4.0 * p.g_ghz * p.g_ghz, 1.5) / p.g_ghz;
      EXPECT_NEAR(std::abs(fd), rhs, 1e-4 * rhs) << "draw " << i << " s " << s;
    }
  }
}

TEST(Pulses, AdiabaticMonotoneAcrossZero) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.02, 2.0);
  for (int i = 0; i < 50; ++i) {
    AdiabaticPulseParams p = random_params(rng);
    p.f_tau_ghz = pos(rng);
    double prev = adiabatic_detuning(p, 0.0);
    for (int k = 1; k <= 200; ++k) {
      const double v = adiabatic_detuning(p, p.tau_ns * k / 200.0);
      EXPECT_GT(v, prev);
      prev = v;
    }
    const double tz = adiabatic_zero_crossing(p);
    EXPECT_GT(tz, 0.0);
    EXPECT_LT(tz, p.tau_ns);
    EXPECT_NEAR(adiabatic_detuning(p, tz), 0.0, 1e-9);
  }
}

TEST(Pulses, LargeGApproachesLinearRamp) {
  double last = 1e9;
  for (double g : {1.0, 10.0, 100.0}) {
    const AdiabaticPulseParams p{20.0, -1.0, 1.0, g};
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double t = 0.2 * k;
      worst = std::max(worst, std::abs(adiabatic_detuning(p, t) - (-1.0 + 2.0 * t / 20.0)));
    }
    EXPECT_LT(worst, last);
    last = worst;
  }
  EXPECT_LT(last, 1e-3);
}

TEST(Pulses, InvalidAdiabaticParameters) {
  EXPECT_THROW(adiabatic_coefficients({0.0, -1.0, 1.0, 0.05}), InvalidPulseError);
  EXPECT_THROW(adiabatic_coefficients({10.0, -1.0, 1.0, 0.0}), InvalidPulseError);
  EXPECT_THROW(adiabatic_coefficients({10.0, 0.0, 0.0, 0.05}), InvalidPulseError);
  EXPECT_THROW(adiabatic_coefficients({10.0, NAN, 1.0, 0.05}), InvalidPulseError);
  EXPECT_THROW(adiabatic_detuning({10.0, -1.0, 1.0, 0.05}, 11.0), ValidationError);
  // Both endpoints so far out that the domain argument underflows.
  EXPECT_THROW(adiabatic_coefficients({10.0, -1e9, 1.0, 1e-6}), InvalidPulseError);
}

TEST(Pulses, SampleShapes) {
  const PulseSpec sq = PulseSpec::single("C0", SquareShape{-0.2, 10.0, 0.0});
  EXPECT_DOUBLE_EQ(sample_pulse(sq, 5.0).at("C0"), -0.2);
  EXPECT_DOUBLE_EQ(sample_channel(sq, "C0", 10.5), 0.0);
  EXPECT_DOUBLE_EQ(sample_channel(sq, "C0", -1.0), 0.0);
  const PulseSpec ramp = PulseSpec::single("C0", RampShape{0.0, -1.0, 20.0});
  EXPECT_DOUBLE_EQ(sample_channel(ramp, "C0", 10.0), -0.5);

  const PulseSpec edged = PulseSpec::single("C1", SquareShape{1.0, 10.0, 2.0}, 5.0);
  EXPECT_DOUBLE_EQ(sample_channel(edged, "C1", 5.0), 0.0);
  EXPECT_NEAR(sample_channel(edged, "C1", 6.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(sample_channel(edged, "C1", 10.0), 1.0);
  EXPECT_NEAR(sample_channel(edged, "C1", 14.0), 0.5, 1e-15);
  EXPECT_EQ(edged.breakpoints(), (std::vector<double>{5.0, 7.0, 13.0, 15.0}));

  const AdiabaticShape a{{30.0, -1.0, 0.5, 0.1}, -1.2};
  const PulseSpec ad = PulseSpec::single("C2", a);
  EXPECT_NEAR(sample_channel(ad, "C2", 0.0), -1.2 + 1.0, 1e-12);
  EXPECT_NEAR(sample_channel(ad, "C2", 15.0), -1.2 - adiabatic_detuning(a.params, 15.0), 1e-12);
}

TEST(Pulses, CompositeDuration) {
  PulseSpec s;
  s.add({"C0", 0.0, SquareShape{-1.0, 31.0, 0.0}});
  s.add({"C2", 31.0, SquareShape{-1.0, 30.0, 0.0}});
  s.add({"C0", 61.0, RampShape{0.0, 0.6, 22.0}});
  s.add({"C1", 0.0, SquareShape{0.7, 5.0, 1.0}});
  EXPECT_DOUBLE_EQ(s.duration(), 83.0);
  EXPECT_EQ(s.channels(), (std::vector<std::string>{"C0", "C2", "C1"}));
  EXPECT_THROW(s.add({"C0", 80.0, SquareShape{-1.0, 5.0, 0.0}}), ValidationError);
  EXPECT_NO_THROW(s.add({"C0", 83.0, SquareShape{-1.0, 5.0, 0.0}}));
  PulseSpec t;
  t.append(s, 10.0);
  EXPECT_DOUBLE_EQ(t.duration(), 98.0);
}

TEST(Pulses, ShapeValidation) {
  EXPECT_THROW(PulseSpec::single("C0", SquareShape{1.0, 0.0, 0.0}), InvalidPulseError);
  EXPECT_THROW(PulseSpec::single("C0", SquareShape{1.0, 4.0, 2.5}), InvalidPulseError);
  EXPECT_THROW(PulseSpec::single("C0", RampShape{0.0, 1.0, -1.0}), InvalidPulseError);
  EXPECT_THROW(PulseSpec::single("C0", SquareShape{1.0, 4.0, 0.0}, -1.0), ValidationError);
  EXPECT_THROW(PulseSpec::single("", SquareShape{1.0, 4.0, 0.0}), ValidationError);
}

TEST(Pulses, JsonRoundTrip) {
  PulseSpec s;
  s.add({"C2", 0.0, AdiabaticShape{{18.4, -1.1, 0.076, 0.162}, -1.1}});
  s.add({"C0", 31.0, SquareShape{-1.23, 8.75, 2.49}});
  s.add({"C1", 31.0, RampShape{0.0, 0.6, 22.0}});
  const PulseSpec back = pulse_from_json(pulse_to_json(s));
  EXPECT_EQ(pulse_to_json(back), pulse_to_json(s));
  for (double t = 0.0; t < 60.0; t += 0.7) {
    EXPECT_EQ(sample_pulse(back, t), sample_pulse(s, t));
  }
  try {
    pulse_from_json(nlohmann::json::parse(R"([{"channel": "C0", "shape": "gauss"}])"));
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_EQ(e.field(), "pulses[0].shape");
  }
  EXPECT_THROW(pulse_from_json(nlohmann::json::parse(R"([{"channel": "C0", "shape": "square",
      "params": {"amplitude_ghz": 1, "duration_ns": -2}}])")), InvalidPulseError);
}

TEST(Pulses, CsvSamples) {
  const PulseSpec s = PulseSpec::single("C0", RampShape{0.0, 1.0, 2.0});
  const std::string csv = pulse_csv(s, 2.0);
  EXPECT_EQ(csv, "t_ns,C0_offset_ghz\n0,0\n0.5,0.25\n1,0.5\n1.5,0.75\n2,0\n");
}

TEST(Pulses, ChannelsMustBeTunable) {
  const SystemModel sys = two_level(0.05);
  EXPECT_NO_THROW(check_channels(sys, PulseSpec::single("C", SquareShape{-1.0, 1.0, 0.0})));
  EXPECT_THROW(check_channels(sys, PulseSpec::single("Q", SquareShape{-1.0, 1.0, 0.0})),
               ValidationError);
  EXPECT_THROW(check_channels(sys, PulseSpec::single("X", SquareShape{-1.0, 1.0, 0.0})),
               ValidationError);
}

TEST(Pulses, StaticPulseHasZeroMetric) {
  const SystemModel sys = two_level(0.05);
  const PulseSpec s = PulseSpec::single("C", SquareShape{-0.8, 10.0, 0.0});
  EXPECT_NEAR(adiabaticity_metric(sys, s, {1, 0}, {0, 1}, 50), 0.0, 1e-9);
}

TEST(Pulses, RampMetricHalvesWithDuration) {
  const SystemModel sys = two_level(0.05);
  double last = 1e9;
  for (double d : {5.0, 10.0, 20.0, 40.0}) {
    const double m =
        adiabaticity_metric(sys, PulseSpec::single("C", RampShape{-0.5, -1.5, d}), {1, 0}, {0, 1}, 100);
    EXPECT_LT(m, last);
    if (last < 1e8) EXPECT_NEAR(m / last, 0.5, 1e-3);
    last = m;
  }
}

TEST(Pulses, RolandCerfMetricIsFlat) {
  const double g = 0.05;
  const SystemModel sys = two_level(g);
  // Origin puts the coupler at f_q - Delta(t).
  const AdiabaticShape a{{40.0, -1.0, 1.0, g}, -1.0};
  AdiabaticityOptions o;
  o.samples = 200;
  const auto prof = adiabaticity_profile(sys, PulseSpec::single("C", a), {1, 0}, {0, 1}, o);
  const auto [lo, hi] = std::minmax_element(prof.ratio.begin(), prof.ratio.end());
  EXPECT_LT((*hi - *lo) / *hi, 0.05);
  const double beta = std::abs(adiabatic_coefficients(a.params).beta);
  // Two-level value of the ratio with H in rad/ns: beta / (2 pi).
  EXPECT_NEAR(*hi, beta / kTwoPi, 0.05 * beta / kTwoPi);
}

}  // namespace
}  // namespace resetlab

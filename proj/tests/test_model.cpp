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
#include <string>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "resetlab/cli.hpp"
#include "resetlab/device_config.hpp"
#include "resetlab/error.hpp"
#include "resetlab/model.hpp"

namespace resetlab {
namespace {

const char *kQcr = R"({
  "modes": [
    {"name": "Q0", "kind": "transmon", "frequency_ghz": 5.176, "anharmonicity_ghz": -0.256},
    {"name": "C0", "kind": "transmon", "frequency_ghz": 6.376, "anharmonicity_ghz": -0.15,
     "tunable": true},
    {"name": "R0", "kind": "resonator", "frequency_ghz": 6.752, "kappa_ghz": 0.000427}
  ],
  "couplings": [
    {"a": "Q0", "b": "C0", "g_ghz": 0.047},
    {"a": "Q0", "b": "R0", "g_ghz": 0.046},
    {"a": "C0", "b": "R0", "g_ghz": 0.05}
  ]
})";

SystemModel qcr() { return build_system(parse_device_description(kQcr)); }

TEST(Model, TwoQubitDeviceFields) {
  const SystemModel s = load_device_config(resolve_data_file("device_two_qubit", ""));
  EXPECT_DOUBLE_EQ(s.frequency_ghz(s.mode_index("Q0")), 5.176);
  EXPECT_DOUBLE_EQ(s.anharmonicity_ghz(s.mode_index("Q0")), -0.256);
  EXPECT_DOUBLE_EQ(s.frequency_ghz(s.mode_index("Q1")), 4.534);
  EXPECT_DOUBLE_EQ(s.anharmonicity_ghz(s.mode_index("Q1")), -0.158);
  EXPECT_DOUBLE_EQ(s.frequency_ghz(s.mode_index("R0")), 6.752);
  EXPECT_DOUBLE_EQ(s.kappa_ghz(s.mode_index("R0")), 0.000427);
  EXPECT_EQ(s.kind(s.mode_index("R0")), ModeKind::kResonator);
  EXPECT_TRUE(s.tunable(s.mode_index("C0")));
  EXPECT_FALSE(s.tunable(s.mode_index("Q0")));
  bool found = false;
  for (const auto &c : s.couplings()) {
    if (c.mode_a == "Q0" && c.mode_b == "C0") {
      EXPECT_DOUBLE_EQ(c.g_ghz, 0.047);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(s.dimension(), 2187u);
}

TEST(Model, BasisRoundTrip) {
  const SystemModel s = qcr();
  ASSERT_EQ(s.dimension(), 27u);
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    EXPECT_EQ(s.basis_index(s.basis_state(i)), i);
  }
  EXPECT_EQ(s.basis_index({1, 0, 0}), 9u);
  EXPECT_EQ(s.basis_index({0, 0, 1}), 1u);
  EXPECT_EQ(s.label({1, 0, 2}), "|102>");
  EXPECT_THROW(s.basis_index({3, 0, 0}), ValidationError);
  EXPECT_THROW(s.basis_index({0, 0}), ValidationError);
  EXPECT_THROW(s.basis_state(27), ValidationError);
}

TEST(Model, SectorsPartitionTheBasis) {
  const SystemModel s = qcr();
  std::size_t total = 0;
  for (int n = 0; n <= s.max_excitation(); ++n) {
    for (std::size_t i : s.sector_indices(n)) EXPECT_EQ(s.excitation(i), n);
    total += s.sector_indices(n).size();
  }
  EXPECT_EQ(total, s.dimension());
  EXPECT_EQ(s.max_excitation(), 6);
  EXPECT_EQ(s.sector_indices(1).size(), 3u);
  EXPECT_EQ(s.sector_indices(2).size(), 6u);
}

TEST(Model, Validation) {
  DeviceDescription d = parse_device_description(kQcr);
  auto bad = d;
  bad.modes[1].name = "Q0";
  EXPECT_THROW(build_system(bad), ValidationError);
  bad = d;
  std::get<TransmonParams>(bad.modes[0].params).levels = 1;
  EXPECT_THROW(build_system(bad), ValidationError);
  bad = d;
  std::get<TransmonParams>(bad.modes[0].params).frequency_ghz = -1.0;
  EXPECT_THROW(build_system(bad), ValidationError);
  bad = d;
  bad.couplings.push_back({"Q0", "X9", 0.01});
  EXPECT_THROW(build_system(bad), ValidationError);
  bad = d;
  bad.couplings.push_back({"Q0", "Q0", 0.01});
  EXPECT_THROW(build_system(bad), ValidationError);
  bad = d;
  bad.couplings.push_back({"C0", "Q0", 0.01});
  EXPECT_THROW(build_system(bad), ValidationError);
  bad = d;
  std::get<ResonatorParams>(bad.modes[2].params).kappa_ghz = -1e-3;
  EXPECT_THROW(build_system(bad), ValidationError);

  try {
    parse_device_description(R"({"modes": [{"name": "Q", "kind": "fluxonium",
                                  "frequency_ghz": 1.0}]})");
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_EQ(e.field(), "modes[0].kind");
  }
  EXPECT_THROW(parse_device_description("{\"modes\": ["), ValidationError);

  bad = d;
  std::get<TransmonParams>(bad.modes[0].params).anharmonicity_ghz = 0.1;
  EXPECT_EQ(build_system(bad).warnings().size(), 1u);
}

TEST(Model, JsonRoundTrip) {
  const DeviceDescription d = parse_device_description(kQcr);
  const DeviceDescription back = device_description_from_json(device_description_to_json(d));
  const SystemModel a = build_system(d), b = build_system(back);
  const FrequencyMap f = idle_frequencies(a);
  EXPECT_TRUE(DenseMatrix(assemble_hamiltonian(a, f)).isApprox(DenseMatrix(assemble_hamiltonian(b, f))));
}

TEST(Model, TwoModeBlockHasCouplingOffDiagonal) {
  const SystemModel s = build_system(parse_device_description(R"({
    "modes": [
      {"name": "Q", "kind": "transmon", "frequency_ghz": 5.0, "anharmonicity_ghz": -0.2},
      {"name": "C", "kind": "transmon", "frequency_ghz": 5.0, "anharmonicity_ghz": -0.2,
       "tunable": true}],
    "couplings": [{"a": "Q", "b": "C", "g_ghz": 0.047}]})"));
  const auto block = excitation_block(assemble_hamiltonian(s, idle_frequencies(s)), s, 1);
  ASSERT_EQ(block.matrix.rows(), 2);
  EXPECT_NEAR(block.matrix(0, 1).real(), kTwoPi * 0.047, 1e-14);
  EXPECT_NEAR(block.matrix(1, 0).real(), kTwoPi * 0.047, 1e-14);
  EXPECT_NEAR(std::abs(block.matrix(0, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(block.matrix(1, 1)), 0.0, 1e-14);
}

TEST(Model, FirstExcitationBlockOfQcr) {
  const SystemModel s = qcr().with_frame(0.0);
  const auto block = excitation_block(assemble_hamiltonian(s, idle_frequencies(s)), s, 1);
  // Ascending bare index: |001> (R), |010> (C), |100> (Q).
  ASSERT_EQ(block.labels.size(), 3u);
  EXPECT_EQ(block.labels[0], (BasisState{0, 0, 1}));
  EXPECT_EQ(block.labels[2], (BasisState{1, 0, 0}));
  const Eigen::Matrix3d expected{{6.752, 0.05, 0.046}, {0.05, 6.376, 0.047}, {0.046, 0.047, 5.176}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(block.matrix(i, j).real(), kTwoPi * expected(i, j), 1e-12);
      EXPECT_NEAR(block.matrix(i, j).imag(), 0.0, 1e-15);
    }
  }
}

// The sparse assembly agrees with a Kronecker-product construction at
// random coupler frequencies.
TEST(Model, HamiltonianMatchesKroneckerOracle) {
  const SystemModel s = load_device_config(resolve_data_file("device_q0q1c0", ""));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> f(3.5, 7.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double fc = f(rng);
    const FrequencyMap freqs{{"C0", fc}};
    const DenseMatrix h(assemble_hamiltonian(s, freqs));
    std::vector<oracle::Mode> modes;
    for (std::size_t k = 0; k < s.num_modes(); ++k) {
      modes.push_back({s.tunable(k) ? fc : s.frequency_ghz(k), s.anharmonicity_ghz(k), s.levels(k)});
    }
    std::vector<oracle::Link> links;
    for (const auto &l : s.links()) links.push_back({int(l.a), int(l.b), l.g_ghz});
    const oracle::Mat ref = oracle::hamiltonian(modes, links, s.reference_frame_ghz());
    EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(h.isApprox(h.adjoint()));
  }
}

TEST(Model, HamiltonianConservesExcitation) {
  const SystemModel s = load_device_config(resolve_data_file("device_two_qubit", ""));
  const SparseMatrix h = assemble_hamiltonian(s, idle_frequencies(s));
  for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(h, r); it; ++it) {
      EXPECT_EQ(s.excitation(static_cast<std::size_t>(it.row())),
                s.excitation(static_cast<std::size_t>(it.col())));
    }
  }
}

TEST(Model, CouplerFrequencyChecks) {
  const SystemModel s = qcr();
  EXPECT_THROW(assemble_hamiltonian(s, {}), ValidationError);
  EXPECT_THROW(assemble_hamiltonian(s, {{"C0", 6.0}, {"Q0", 5.0}}), ValidationError);
  EXPECT_THROW(assemble_hamiltonian(s, {{"C9", 6.0}}), ValidationError);
}

TEST(Model, SectorHamiltonianMatchesFullBlock) {
  const SystemModel s = qcr();
  // Tunable modes shifted 0.1 GHz above idle.
  FrequencyMap shifted = idle_frequencies(s);
  for (auto &[name, f] : shifted) f += 0.1;
  const SparseMatrix full = assemble_hamiltonian(s, shifted);
  for (int n = 0; n <= 3; ++n) {
    const SectorHamiltonian sec = sector_hamiltonian(s, n, resonator_dissipators(s));
    const auto block = excitation_block(full, s, n);
    DenseMatrix h(sec.fixed);
    for (std::size_t j = 0; j < sec.tunable.size(); ++j) {
      h.diagonal() += (kTwoPi * 0.1 * sec.occupation[j]).cast<cplx>();
    }
    EXPECT_LT((h - block.matrix).cwiseAbs().maxCoeff(), 1e-10) << "sector " << n;
    for (Eigen::Index i = 0; i < sec.loss.size(); ++i) {
      const BasisState occ = s.basis_state(sec.indices[static_cast<std::size_t>(i)]);
      EXPECT_NEAR(sec.loss(i), 0.5 * kTwoPi * 0.000427 * occ[2], 1e-15);
    }
  }
}

TEST(Model, CopiesWithChangedParameters) {
  const SystemModel s = qcr();
  EXPECT_EQ(s.with_levels(4).dimension(), 64u);
  EXPECT_DOUBLE_EQ(s.with_frequency("C0", 5.5).frequency_ghz(1), 5.5);
  EXPECT_DOUBLE_EQ(s.with_frame(1.0).reference_frame_ghz(), 1.0);
  EXPECT_DOUBLE_EQ(s.reference_frame_ghz(), 5.176);
  EXPECT_THROW(s.with_frequency("X", 1.0), ValidationError);
}

}  // namespace
}  // namespace resetlab

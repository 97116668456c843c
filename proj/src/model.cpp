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

#include "resetlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "resetlab/error.hpp"

namespace resetlab {

namespace {

double mode_frequency(const ModeSpec &m) {
  return std::visit([](const auto &p) { return p.frequency_ghz; }, m.params);
}

int mode_levels(const ModeSpec &m) {
  return std::visit([](const auto &p) { return p.levels; }, m.params);
}

std::string path(std::size_t i, const char *field) {
  return "modes[" + std::to_string(i) + "]." + field;
}

}  // namespace

std::size_t SystemModel::mode_index(std::string_view name) const {
  if (auto i = find_mode(name)) return *i;
  throw ValidationError("unknown mode '" + std::string(name) + "'");
}

std::optional<std::size_t> SystemModel::find_mode(std::string_view name) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].name == name) return i;
  }
  return std::nullopt;
}

ModeKind SystemModel::kind(std::size_t i) const {
  return std::holds_alternative<TransmonParams>(modes_.at(i).params) ? ModeKind::kTransmon
                                                                     : ModeKind::kResonator;
}

double SystemModel::frequency_ghz(std::size_t i) const { return mode_frequency(modes_.at(i)); }

double SystemModel::anharmonicity_ghz(std::size_t i) const {
  if (const auto *t = std::get_if<TransmonParams>(&modes_.at(i).params)) {
    return t->anharmonicity_ghz;
  }
  return 0.0;
}

bool SystemModel::tunable(std::size_t i) const {
  if (const auto *t = std::get_if<TransmonParams>(&modes_.at(i).params)) return t->tunable;
  return false;
}

double SystemModel::kappa_ghz(std::size_t i) const {
  if (const auto *r = std::get_if<ResonatorParams>(&modes_.at(i).params)) return r->kappa_ghz;
  return 0.0;
}

std::vector<std::size_t> SystemModel::tunable_modes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (tunable(i)) out.push_back(i);
  }
  return out;
}

int SystemModel::max_excitation() const {
  int n = 0;
  for (int l : levels_) n += l - 1;
  return n;
}

std::size_t SystemModel::basis_index(const BasisState &occupations) const {
  if (occupations.size() != modes_.size()) {
    throw ValidationError("basis state has " + std::to_string(occupations.size()) +
                          " occupations, system has " + std::to_string(modes_.size()) +
                          " modes");
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= levels_[k]) {
      throw ValidationError("occupation " + std::to_string(occupations[k]) + " of mode '" +
                            modes_[k].name + "' exceeds truncation " +
                            std::to_string(levels_[k]));
    }
    index += static_cast<std::size_t>(occupations[k]) * strides_[k];
  }
  return index;
}

BasisState SystemModel::basis_state(std::size_t index) const {
  if (index >= dimension_) {
    throw ValidationError("basis index " + std::to_string(index) + " out of range");
  }
  BasisState occ(modes_.size());
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    occ[k] = static_cast<int>(index / strides_[k]);
    index %= strides_[k];
  }
  return occ;
}

int SystemModel::excitation(std::size_t index) const {
  int n = 0;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    n += static_cast<int>(index / strides_[k]);
    index %= strides_[k];
  }
  return n;
}

std::vector<std::size_t> SystemModel::sector_indices(int n) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (excitation(i) == n) out.push_back(i);
  }
  return out;
}

std::string SystemModel::label(const BasisState &occupations) const {
  const bool wide = std::any_of(levels_.begin(), levels_.end(), [](int l) { return l > 10; });
  std::ostringstream os;
  os << '|';
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    if (wide && k > 0) os << ',';
    os << occupations[k];
  }
  os << '>';
  return os.str();
}

SystemModel SystemModel::with_frame(double frame_ghz) const {
  DeviceDescription d = description_;
  d.frame_ghz = frame_ghz;
  return build_system(d);
}

SystemModel SystemModel::with_levels(int levels) const {
  DeviceDescription d = description_;
  for (auto &m : d.modes) {
    std::visit([levels](auto &p) { p.levels = levels; }, m.params);
  }
  return build_system(d);
}

SystemModel SystemModel::with_frequency(std::string_view mode, double frequency_ghz) const {
  DeviceDescription d = description_;
  bool found = false;
  for (auto &m : d.modes) {
    if (m.name == mode) {
      std::visit([frequency_ghz](auto &p) { p.frequency_ghz = frequency_ghz; }, m.params);
      found = true;
    }
  }
  if (!found) throw ValidationError("unknown mode '" + std::string(mode) + "'");
  return build_system(d);
}

SystemModel build_system(const DeviceDescription &config) {
  if (config.modes.empty()) throw ValidationError("at least one mode is required", "modes");

  SystemModel s;
  s.description_ = config;
  s.modes_ = config.modes;

  std::set<std::string, std::less<>> names;
  for (std::size_t i = 0; i < config.modes.size(); ++i) {
    const ModeSpec &m = config.modes[i];
    if (m.name.empty()) throw ValidationError("mode name is empty", path(i, "name"));
    if (!names.insert(m.name).second) {
      throw ValidationError("duplicate mode name '" + m.name + "'", path(i, "name"));
    }
    const double f = mode_frequency(m);
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw ValidationError("frequency must be positive", path(i, "frequency_ghz"));
    }
    const int levels = mode_levels(m);
    if (levels < 2) throw ValidationError("truncation must be at least 2", path(i, "levels"));
    if (const auto *t = std::get_if<TransmonParams>(&m.params)) {
      if (t->anharmonicity_ghz > 0.0) {
        s.warnings_.push_back("mode '" + m.name + "' has positive anharmonicity");
      }
    } else {
      const auto &r = std::get<ResonatorParams>(m.params);
      if (r.kappa_ghz < 0.0 || !std::isfinite(r.kappa_ghz)) {
        throw ValidationError("kappa must be non-negative", path(i, "kappa_ghz"));
      }
    }
    s.levels_.push_back(levels);
  }

  for (std::size_t j = 0; j < config.couplings.size(); ++j) {
    const Coupling &c = config.couplings[j];
    const std::string where = "couplings[" + std::to_string(j) + "]";
    auto a = s.find_mode(c.mode_a);
    auto b = s.find_mode(c.mode_b);
    if (!a) throw ValidationError("unknown mode '" + c.mode_a + "'", where + ".a");
    if (!b) throw ValidationError("unknown mode '" + c.mode_b + "'", where + ".b");
    if (*a == *b) throw ValidationError("a mode cannot couple to itself", where);
    for (const auto &l : s.links_) {
      if ((l.a == *a && l.b == *b) || (l.a == *b && l.b == *a)) {
        throw ValidationError("duplicate coupling " + c.mode_a + "-" + c.mode_b, where);
      }
    }
    if (!std::isfinite(c.g_ghz)) throw ValidationError("coupling is not finite", where + ".g_ghz");
    s.links_.push_back({*a, *b, c.g_ghz});
  }
  s.couplings_ = config.couplings;

  const std::size_t n = s.modes_.size();
  s.strides_.assign(n, 1);
  for (std::size_t k = n - 1; k > 0; --k) {
    s.strides_[k - 1] = s.strides_[k] * static_cast<std::size_t>(s.levels_[k]);
  }
  s.dimension_ = s.strides_[0] * static_cast<std::size_t>(s.levels_[0]);

  if (config.frame_ghz) {
    s.frame_ghz_ = *config.frame_ghz;
  } else {
    s.frame_ghz_ = mode_frequency(s.modes_[0]);
    for (std::size_t i = 0; i < n; ++i) {
      if (s.kind(i) == ModeKind::kTransmon && !s.tunable(i)) {
        s.frame_ghz_ = s.frequency_ghz(i);
        break;
      }
    }
  }
  return s;
}

std::size_t basis_index(const SystemModel &system, const BasisState &occupations) {
  return system.basis_index(occupations);
}

BasisState basis_state(const SystemModel &system, std::size_t index) {
  return system.basis_state(index);
}

FrequencyMap idle_frequencies(const SystemModel &system) {
  FrequencyMap out;
  for (std::size_t i : system.tunable_modes()) out[system.mode_name(i)] = system.frequency_ghz(i);
  return out;
}

FrequencyMap resonator_dissipators(const SystemModel &system) {
  FrequencyMap out;
  for (std::size_t i = 0; i < system.num_modes(); ++i) {
    if (system.kind(i) == ModeKind::kResonator && system.kappa_ghz(i) > 0.0) {
      out[system.mode_name(i)] = system.kappa_ghz(i);
    }
  }
  return out;
}

namespace {

// Builds H restricted to `indices` (ascending global indices). `frequency`
// holds the per-mode frequency to use on the diagonal.
SparseMatrix restricted_hamiltonian(const SystemModel &system,
                                    const std::vector<std::size_t> &indices,
                                    const std::vector<double> &frequency) {
  const std::size_t dim = indices.size();
  const std::size_t n_modes = system.num_modes();
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(dim * (1 + 2 * system.links().size()));

  auto local = [&](std::size_t global) -> std::optional<std::size_t> {
    auto it = std::lower_bound(indices.begin(), indices.end(), global);
    if (it == indices.end() || *it != global) return std::nullopt;
    return static_cast<std::size_t>(it - indices.begin());
  };

  const double frame = system.reference_frame_ghz();
  for (std::size_t row = 0; row < dim; ++row) {
    const BasisState occ = system.basis_state(indices[row]);
    double diag = 0.0;
    for (std::size_t k = 0; k < n_modes; ++k) {
      const double n = occ[k];
      diag += (frequency[k] - frame) * n + 0.5 * system.anharmonicity_ghz(k) * n * (n - 1.0);
    }
    if (diag != 0.0) triplets.emplace_back(row, row, cplx(kTwoPi * diag, 0.0));

    // g (a^dag b + b^dag a): from `occ`, move one quantum b -> a and a -> b.
    for (const auto &link : system.links()) {
      for (int dir = 0; dir < 2; ++dir) {
        const std::size_t up = dir == 0 ? link.a : link.b;
        const std::size_t down = dir == 0 ? link.b : link.a;
        if (occ[down] == 0 || occ[up] + 1 >= system.levels(up)) continue;
        BasisState to = occ;
        to[down] -= 1;
        to[up] += 1;
        auto col = local(system.basis_index(to));
        if (!col) continue;
        const double amp = std::sqrt(static_cast<double>(occ[down])) *
                           std::sqrt(static_cast<double>(occ[up] + 1));
        triplets.emplace_back(*col, row, cplx(kTwoPi * link.g_ghz * amp, 0.0));
      }
    }
  }
  SparseMatrix h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.setFromTriplets(triplets.begin(), triplets.end());
  h.makeCompressed();
  return h;
}

std::vector<double> static_frequencies(const SystemModel &system) {
  std::vector<double> f(system.num_modes());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = system.frequency_ghz(k);
  return f;
}

}  // namespace

SparseMatrix assemble_hamiltonian(const SystemModel &system,
                                  const FrequencyMap &coupler_frequencies) {
  std::vector<double> f = static_frequencies(system);
  for (const auto &[name, value] : coupler_frequencies) {
    const std::size_t k = system.mode_index(name);
    if (!system.tunable(k)) {
      throw ValidationError("mode '" + name + "' is not tunable", "coupler_frequencies");
    }
    f[k] = value;
  }
  for (std::size_t k : system.tunable_modes()) {
    if (!coupler_frequencies.contains(system.mode_name(k))) {
      throw ValidationError("missing frequency for tunable mode '" + system.mode_name(k) + "'",
                            "coupler_frequencies");
    }
  }
  std::vector<std::size_t> all(system.dimension());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return restricted_hamiltonian(system, all, f);
}

ExcitationBlock excitation_block(const SparseMatrix &h, const SystemModel &system, int n) {
  if (n < 0) throw ValidationError("excitation number must be non-negative");
  if (n > system.max_excitation()) {
    throw ValidationError("excitation number " + std::to_string(n) +
                          " exceeds the largest representable " +
                          std::to_string(system.max_excitation()));
  }
  if (static_cast<std::size_t>(h.rows()) != system.dimension() || h.rows() != h.cols()) {
    throw ValidationError("matrix dimension does not match the system basis");
  }
  ExcitationBlock block;
  block.indices = system.sector_indices(n);
  const auto dim = static_cast<Eigen::Index>(block.indices.size());
  block.matrix = DenseMatrix::Zero(dim, dim);
  const DenseMatrix dense(h);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      block.matrix(i, j) = dense(static_cast<Eigen::Index>(block.indices[i]),
                                 static_cast<Eigen::Index>(block.indices[j]));
    }
  }
  for (std::size_t idx : block.indices) block.labels.push_back(system.basis_state(idx));
  return block;
}

SectorHamiltonian sector_hamiltonian(const SystemModel &system, int n,
                                     const FrequencyMap &dissipators) {
  if (n < 0 || n > system.max_excitation()) {
    throw ValidationError("excitation sector " + std::to_string(n) + " is empty");
  }
  SectorHamiltonian out;
  out.excitation = n;
  out.indices = system.sector_indices(n);
  out.fixed = restricted_hamiltonian(system, out.indices, static_frequencies(system));
  out.tunable = system.tunable_modes();

  const auto dim = static_cast<Eigen::Index>(out.indices.size());
  std::vector<BasisState> occ;
  occ.reserve(out.indices.size());
  for (std::size_t idx : out.indices) occ.push_back(system.basis_state(idx));

  for (std::size_t k : out.tunable) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = occ[static_cast<std::size_t>(i)][k];
    out.occupation.push_back(std::move(v));
  }

  out.loss = Eigen::VectorXd::Zero(dim);
  for (const auto &[name, kappa] : dissipators) {
    const std::size_t k = system.mode_index(name);
    if (system.kind(k) != ModeKind::kResonator) {
      throw ValidationError("dissipator on '" + name + "' must act on a resonator", "dissipators");
    }
    if (kappa < 0.0) throw ValidationError("kappa must be non-negative", "dissipators." + name);
    for (Eigen::Index i = 0; i < dim; ++i) {
      out.loss(i) += 0.5 * kTwoPi * kappa * occ[static_cast<std::size_t>(i)][k];
    }
  }
  return out;
}

}  // namespace resetlab

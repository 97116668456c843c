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

#include "resetlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "resetlab/error.hpp"
#include "resetlab/io.hpp"

namespace resetlab {

namespace {

// Commutator-free fourth-order Magnus: Gauss nodes and exponent weights.
const double kSqrt3 = std::sqrt(3.0);
const double kNode1 = 0.5 - kSqrt3 / 6.0;
const double kNode2 = 0.5 + kSqrt3 / 6.0;
const double kWeight1 = (3.0 - 2.0 * kSqrt3) / 12.0;
const double kWeight2 = (3.0 + 2.0 * kSqrt3) / 12.0;

// Largest |h A| handled by a single Taylor series.
constexpr double kTaylorSpan = 1.0;

struct Workspace {
  Eigen::VectorXcd term, acc, tmp;
};

// v <- exp(-i h (c F + diag(d))) v.
void exp_action(const SparseMatrix &f, double c, double f_norm, const Eigen::VectorXcd &d,
                double h, Eigen::VectorXcd &v, Workspace &w) {
  const double span = h * (std::abs(c) * f_norm + d.cwiseAbs().maxCoeff());
  const int substeps = std::max(1, static_cast<int>(std::ceil(span / kTaylorSpan)));
  const double tau = h / substeps;
  for (int s = 0; s < substeps; ++s) {
    w.term = v;
    w.acc = v;
    for (int k = 1; k < 60; ++k) {
      w.tmp.noalias() = f * w.term;
      w.tmp = c * w.tmp + d.cwiseProduct(w.term);
      w.term = w.tmp * cplx(0.0, -tau / k);
      w.acc += w.term;
      if (w.term.squaredNorm() <= 1e-34 * w.acc.squaredNorm()) break;
    }
    v.swap(w.acc);
  }
}

double max_row_sum(const SparseMatrix &m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Greedy one-to-one matching: rows are candidates (new vectors), columns are
// references; largest |overlap| first. Returns match[column] = row.
std::vector<Eigen::Index> greedy_match(const Eigen::MatrixXd &weight) {
  const Eigen::Index n = weight.rows();
  std::vector<std::pair<double, std::pair<Eigen::Index, Eigen::Index>>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) pairs.push_back({weight(i, j), {i, j}});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });
  std::vector<Eigen::Index> match(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  Eigen::Index assigned = 0;
  for (const auto &[value, ij] : pairs) {
    const auto [i, j] = ij;
    if (used[static_cast<std::size_t>(i)] || match[static_cast<std::size_t>(j)] >= 0) continue;
    used[static_cast<std::size_t>(i)] = 1;
    match[static_cast<std::size_t>(j)] = i;
    if (++assigned == n) break;
  }
  return match;
}

DenseMatrix sector_hermitian(const SectorHamiltonian &h, const SystemModel &system,
                             const FrequencyMap &coupler_frequencies) {
  DenseMatrix m(h.fixed);
  for (std::size_t j = 0; j < h.tunable.size(); ++j) {
    const std::size_t k = h.tunable[j];
    auto it = coupler_frequencies.find(system.mode_name(k));
    if (it == coupler_frequencies.end()) continue;
    const double shift = kTwoPi * (it->second - system.frequency_ghz(k));
    m.diagonal() += (shift * h.occupation[j]).cast<cplx>();
  }
  return m;
}

}  // namespace

QuantumState QuantumState::basis(const SystemModel &system, const BasisState &occupations) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system.dimension()));
  v(static_cast<Eigen::Index>(system.basis_index(occupations))) = 1.0;
  return QuantumState(std::move(v));
}

QuantumState QuantumState::superposition(const SystemModel &system,
                                         const std::vector<std::pair<BasisState, cplx>> &terms) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system.dimension()));
  for (const auto &[s, a] : terms) v(static_cast<Eigen::Index>(system.basis_index(s))) += a;
  const double n = v.norm();
  if (n == 0.0) throw ValidationError("superposition has zero norm");
  return QuantumState(v / n);
}

std::map<BasisState, double> Trajectory::populations_at(const SystemModel &system,
                                                        std::size_t row) const {
  std::map<BasisState, double> out;
  for (std::size_t j = 0; j < tracked.size(); ++j) {
    out[system.basis_state(tracked[j])] =
        populations(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j));
  }
  return out;
}

Propagator::Propagator(const SystemModel &system, const FrequencyMap &dissipators)
    : system_(system) {
  for (int n = 0; n <= system.max_excitation(); ++n) {
    Sector s;
    s.h = sector_hamiltonian(system, n, dissipators);
    s.fixed_norm = max_row_sum(s.h.fixed);
    sectors_.push_back(std::move(s));
  }
}

namespace {

std::vector<double> build_grid(const PulseSpec &schedule, double duration, double step) {
  std::vector<double> knots{0.0};
  for (double b : schedule.breakpoints()) {
    if (b > 1e-12 && b < duration - 1e-12) knots.push_back(b);
  }
  knots.push_back(duration);
  std::vector<double> grid{0.0};
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / step - 1e-9)));
    for (long k = 1; k < n; ++k) grid.push_back(a + (b - a) * static_cast<double>(k) / n);
    grid.push_back(b);
  }
  return grid;
}

}  // namespace

void Propagator::evolve_sector(const Sector &sector, const PulseSampler &sampler,
                               const std::vector<double> &grid, Scheme scheme, Eigen::VectorXcd &v) const {
  const SectorHamiltonian &h = sector.h;
  const auto dim = static_cast<Eigen::Index>(h.indices.size());
  const std::size_t nt = h.tunable.size();
  std::vector<double> o1(nt), o2(nt);
  Eigen::VectorXcd d(dim);
  Workspace w;
  const Eigen::VectorXcd loss = cplx(0.0, -1.0) * h.loss.cast<cplx>();

  auto diagonal = [&](const std::vector<double> &a, double wa, const std::vector<double> &b,
                      double wb, double loss_weight) {
    d = loss_weight * loss;
    for (std::size_t j = 0; j < nt; ++j) {
      const double shift = kTwoPi * (wa * a[j] + wb * b[j]);
      if (shift != 0.0) d += (shift * h.occupation[j]).cast<cplx>();
    }
  };

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t = grid[i];
    const double dt = grid[i + 1] - t;
    if (scheme == Scheme::kMidpoint) {
      sampler.offsets(t + 0.5 * dt, o1.data());
      diagonal(o1, 1.0, o1, 0.0, 1.0);
      exp_action(h.fixed, 1.0, sector.fixed_norm, d, dt, v, w);
    } else {
      sampler.offsets(t + kNode1 * dt, o1.data());
      sampler.offsets(t + kNode2 * dt, o2.data());
      diagonal(o1, kWeight2, o2, kWeight1, 0.5);
      exp_action(h.fixed, 0.5, sector.fixed_norm, d, dt, v, w);
      diagonal(o1, kWeight1, o2, kWeight2, 0.5);
      exp_action(h.fixed, 0.5, sector.fixed_norm, d, dt, v, w);
    }
  }
}

QuantumState Propagator::evolve(const PulseSpec &schedule, const QuantumState &initial,
                                double duration_ns, double step_ns, Scheme scheme) const {
  if (initial.dimension() != system_.dimension()) {
    throw ValidationError("state dimension does not match the system basis");
  }
  if (!(step_ns > 0.0)) throw ValidationError("step must be positive", "step_ns");
  if (!(duration_ns >= 0.0)) throw ValidationError("duration must be non-negative", "duration_ns");
  const PulseSampler sampler(system_, schedule);
  const std::vector<double> grid = build_grid(schedule, duration_ns, step_ns);
  Eigen::VectorXcd out = initial.amplitudes();
  for (const Sector &s : sectors_) {
    const auto dim = static_cast<Eigen::Index>(s.h.indices.size());
    Eigen::VectorXcd v(dim);
    for (Eigen::Index p = 0; p < dim; ++p) v(p) = out(static_cast<Eigen::Index>(s.h.indices[p]));
    if (v.squaredNorm() == 0.0) continue;
    if (duration_ns > 0.0) evolve_sector(s, sampler, grid, scheme, v);
    for (Eigen::Index p = 0; p < dim; ++p) out(static_cast<Eigen::Index>(s.h.indices[p])) = v(p);
  }
  return QuantumState(std::move(out));
}

Trajectory Propagator::run(const PulseSpec &schedule, const QuantumState &initial,
                           double duration_ns, const PropagateOptions &options) const {
  if (initial.dimension() != system_.dimension()) {
    throw ValidationError("state dimension does not match the system basis");
  }
  if (std::abs(initial.norm() - 1.0) > 1e-10) {
    throw ValidationError("initial state must be normalized");
  }
  if (!(options.step_ns > 0.0)) throw ValidationError("step must be positive", "step_ns");
  if (!(duration_ns >= 0.0)) throw ValidationError("duration must be non-negative", "duration_ns");
  if (options.record_interval_ns < 0.0) {
    throw ValidationError("record interval must be non-negative", "record_interval_ns");
  }

  const PulseSampler sampler(system_, schedule);
  const std::vector<double> grid = build_grid(schedule, duration_ns, options.step_ns);

  // Rows to record, as grid indices.
  std::vector<std::size_t> rows{0};
  if (options.record_interval_ns > 0.0) {
    double next = options.record_interval_ns;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      if (grid[i] >= next - 1e-12) {
        rows.push_back(i);
        while (next <= grid[i] + 1e-12) next += options.record_interval_ns;
      }
    }
  }
  if (grid.size() > 1) rows.push_back(grid.size() - 1);

  Trajectory traj;
  traj.steps = grid.size() - 1;
  for (std::size_t r : rows) traj.times_ns.push_back(grid[r]);

  std::vector<const Sector *> active;
  for (const Sector &s : sectors_) {
    double w = 0.0;
    for (std::size_t idx : s.h.indices) w += std::norm(initial.amplitudes()(static_cast<Eigen::Index>(idx)));
    if (w > 0.0) {
      active.push_back(&s);
      traj.tracked.insert(traj.tracked.end(), s.h.indices.begin(), s.h.indices.end());
    }
  }
  traj.populations = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                           static_cast<Eigen::Index>(traj.tracked.size()));
  Eigen::VectorXd norm_sq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));

  Eigen::VectorXcd out = initial.amplitudes();
  Eigen::Index column = 0;
  for (const Sector *s : active) {
    const auto dim = static_cast<Eigen::Index>(s->h.indices.size());
    Eigen::VectorXcd v(dim);
    for (Eigen::Index p = 0; p < dim; ++p) v(p) = out(static_cast<Eigen::Index>(s->h.indices[p]));
    auto record = [&](std::size_t row) {
      const Eigen::VectorXd pop = v.cwiseAbs2();
      traj.populations.block(static_cast<Eigen::Index>(row), column, 1, dim) = pop.transpose();
      norm_sq(static_cast<Eigen::Index>(row)) += pop.sum();
    };
    record(0);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const std::vector<double> piece(grid.begin() + static_cast<long>(rows[r - 1]),
                                      grid.begin() + static_cast<long>(rows[r]) + 1);
      evolve_sector(*s, sampler, piece, options.scheme, v);
      record(r);
    }
    for (Eigen::Index p = 0; p < dim; ++p) out(static_cast<Eigen::Index>(s->h.indices[p])) = v(p);
    column += dim;
  }
  for (Eigen::Index r = 0; r < norm_sq.size(); ++r) traj.norms.push_back(std::sqrt(norm_sq(r)));
  traj.final_state = QuantumState(std::move(out));

  if (options.check_convergence && duration_ns > 0.0) {
    const QuantumState fine =
        evolve(schedule, initial, duration_ns, 0.5 * options.step_ns, options.scheme);
    traj.convergence_delta = (traj.final_state.amplitudes().cwiseAbs2() -
                              fine.amplitudes().cwiseAbs2())
                                 .cwiseAbs()
                                 .maxCoeff();
    if (traj.convergence_delta > options.convergence_tolerance) {
      throw ConvergenceError("halving the step changed a final population by " +
                             format_double(traj.convergence_delta) + " (tolerance " +
                             format_double(options.convergence_tolerance) + ")");
    }
  }
  return traj;
}

Trajectory propagate(const SystemModel &system, const PulseSpec &schedule,
                     const QuantumState &initial, double duration_ns,
                     const FrequencyMap &dissipators, const PropagateOptions &options) {
  return Propagator(system, dissipators).run(schedule, initial, duration_ns, options);
}

std::vector<Trajectory> propagate_many(const Propagator &propagator, const PulseSpec &schedule,
                                       const std::vector<QuantumState> &initial,
                                       double duration_ns, const PropagateOptions &options) {
  std::vector<Trajectory> out(initial.size());
  parallel_for(initial.size(), [&](std::size_t i) {
    out[i] = propagator.run(schedule, initial[i], duration_ns, options);
  });
  return out;
}

std::map<BasisState, double> populations(const QuantumState &state, const SystemModel &system) {
  if (state.dimension() != system.dimension()) {
    throw ValidationError("state dimension does not match the system basis");
  }
  std::map<BasisState, double> out;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const double p = std::norm(state.amplitudes()(static_cast<Eigen::Index>(i)));
    if (p > 0.0) out[system.basis_state(i)] = p;
  }
  return out;
}

std::vector<double> marginal(const QuantumState &state, const SystemModel &system,
                             std::size_t mode) {
  if (state.dimension() != system.dimension()) {
    throw ValidationError("state dimension does not match the system basis");
  }
  std::vector<double> out(static_cast<std::size_t>(system.levels(mode)), 0.0);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    out[static_cast<std::size_t>(system.basis_state(i)[mode])] +=
        std::norm(state.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  return out;
}

DressedBasis::DressedBasis(const SystemModel &system, int max_sector)
    : DressedBasis(system, idle_frequencies(system), max_sector) {}

DressedBasis::DressedBasis(const SystemModel &system, const FrequencyMap &coupler_frequencies,
                           int max_sector)
    : system_(system) {
  for (const auto &[name, f] : coupler_frequencies) {
    if (!system.tunable(system.mode_index(name))) {
      throw ValidationError("mode '" + name + "' is not tunable", "coupler_frequencies");
    }
    (void)f;
  }
  const int top = max_sector < 0 ? system.max_excitation()
                                 : std::min(max_sector, system.max_excitation());
  for (int n = 0; n <= top; ++n) {
    const SectorHamiltonian h = sector_hamiltonian(system, n);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sector_hermitian(h, system, coupler_frequencies));
    const DenseMatrix &v = eig.eigenvectors();
    // weight(i, j): eigenvector i against bare state j.
    const Eigen::MatrixXd weight = v.cwiseAbs2().transpose();
    const auto match = greedy_match(weight);
    Block b;
    b.indices = h.indices;
    b.vectors.resize(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      Eigen::VectorXcd col = v.col(match[static_cast<std::size_t>(j)]);
      const cplx a = col(j);
      if (std::abs(a) > 0.0) col *= std::conj(a) / std::abs(a);
      b.vectors.col(j) = col;
    }
    blocks_.push_back(std::move(b));
  }
}

QuantumState DressedBasis::state(const BasisState &label) const {
  return superposition({{label, 1.0}});
}

QuantumState DressedBasis::superposition(
    const std::vector<std::pair<BasisState, cplx>> &terms) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system_.dimension()));
  for (const auto &[label, a] : terms) {
    const std::size_t idx = system_.basis_index(label);
    const Block &b = block_of(idx);
    const auto p = std::lower_bound(b.indices.begin(), b.indices.end(), idx) - b.indices.begin();
    for (std::size_t r = 0; r < b.indices.size(); ++r) {
      v(static_cast<Eigen::Index>(b.indices[r])) += a * b.vectors(static_cast<Eigen::Index>(r), p);
    }
  }
  const double n = v.norm();
  if (n == 0.0) throw ValidationError("superposition has zero norm");
  return QuantumState(v / n);
}

Eigen::VectorXd DressedBasis::populations(const QuantumState &state) const {
  if (state.dimension() != system_.dimension()) {
    throw ValidationError("state dimension does not match the system basis");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(system_.dimension()));
  for (const Block &b : blocks_) {
    const auto dim = static_cast<Eigen::Index>(b.indices.size());
    Eigen::VectorXcd v(dim);
    for (Eigen::Index p = 0; p < dim; ++p) {
      v(p) = state.amplitudes()(static_cast<Eigen::Index>(b.indices[static_cast<std::size_t>(p)]));
    }
    if (v.squaredNorm() == 0.0) continue;
    const Eigen::VectorXcd c = b.vectors.adjoint() * v;
    for (Eigen::Index p = 0; p < dim; ++p) {
      out(static_cast<Eigen::Index>(b.indices[static_cast<std::size_t>(p)])) = std::norm(c(p));
    }
  }
  const double covered = out.sum();
  if (state.amplitudes().squaredNorm() - covered > 1e-12) {
    throw ValidationError("state has weight in sectors above the dressed basis range");
  }
  return out;
}

std::vector<double> DressedBasis::marginal(const QuantumState &state, std::size_t mode) const {
  const Eigen::VectorXd pop = populations(state);
  std::vector<double> out(static_cast<std::size_t>(system_.levels(mode)), 0.0);
  for (std::size_t i = 0; i < system_.dimension(); ++i) {
    out[static_cast<std::size_t>(system_.basis_state(i)[mode])] += pop(static_cast<Eigen::Index>(i));
  }
  return out;
}

double DressedBasis::label_overlap(const BasisState &label) const {
  const std::size_t idx = system_.basis_index(label);
  const Block &b = block_of(idx);
  const auto p = std::lower_bound(b.indices.begin(), b.indices.end(), idx) - b.indices.begin();
  return std::abs(b.vectors(p, p));
}

const DressedBasis::Block &DressedBasis::block_of(std::size_t index) const {
  const auto n = static_cast<std::size_t>(system_.excitation(index));
  if (n >= blocks_.size()) {
    throw ValidationError("state " + system_.label(index) + " lies above the dressed basis range");
  }
  return blocks_[n];
}

std::size_t SpectrumCurve::trace(const BasisState &label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ValidationError("no trace is labeled with the requested state");
}

SpectrumCurve spectrum_scan(const SystemModel &system, const std::string &coupler, double lo_ghz,
                            double hi_ghz, int points, int n) {
  if (points < 2) throw ValidationError("a scan needs at least two points", "points");
  if (!(hi_ghz > lo_ghz)) throw ValidationError("scan range must be increasing", "range");
  const std::size_t k = system.mode_index(coupler);
  if (!system.tunable(k)) throw ValidationError("mode '" + coupler + "' is not tunable", "coupler");
  const SectorHamiltonian h = sector_hamiltonian(system, n);

  SpectrumCurve curve;
  curve.coupler = coupler;
  curve.excitation = n;
  const auto dim = static_cast<Eigen::Index>(h.indices.size());
  curve.energies_ghz.resize(points, dim);
  for (std::size_t idx : h.indices) curve.labels.push_back(system.basis_state(idx));

  FrequencyMap freqs = idle_frequencies(system);
  DenseMatrix previous;
  const double offset = n * system.reference_frame_ghz();
  for (int i = 0; i < points; ++i) {
    const double f = lo_ghz + (hi_ghz - lo_ghz) * i / (points - 1);
    curve.frequencies_ghz.push_back(f);
    freqs[coupler] = f;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sector_hermitian(h, system, freqs));
    const DenseMatrix &v = eig.eigenvectors();
    // weight(i, j): new eigenvector i against reference j (bare state or
    // previous trace vector).
    const Eigen::MatrixXd weight =
        i == 0 ? Eigen::MatrixXd(v.cwiseAbs2().transpose())
               : Eigen::MatrixXd((v.adjoint() * previous).cwiseAbs2());
    const auto match = greedy_match(weight);
    DenseMatrix ordered(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index src = match[static_cast<std::size_t>(j)];
      ordered.col(j) = v.col(src);
      curve.energies_ghz(i, j) = eig.eigenvalues()(src) / kTwoPi + offset;
    }
    previous = std::move(ordered);
  }
  return curve;
}

AvoidedCrossing avoided_crossing(const SpectrumCurve &curve, const BasisState &a,
                                 const BasisState &b) {
  const auto ia = static_cast<Eigen::Index>(curve.trace(a));
  const auto ib = static_cast<Eigen::Index>(curve.trace(b));
  const auto &x = curve.frequencies_ghz;
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("spectrum has fewer than two points");
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = curve.energies_ghz(static_cast<Eigen::Index>(i), ia) -
              curve.energies_ghz(static_cast<Eigen::Index>(i), ib);
  }
  AvoidedCrossing out;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (diff[i] == 0.0 || (diff[i] > 0.0) != (diff[i + 1] > 0.0)) {
      const double s = diff[i] == 0.0 ? 0.0 : diff[i] / (diff[i] - diff[i + 1]);
      out.location_ghz = x[i] + s * (x[i + 1] - x[i]);
      out.gap_ghz = 0.0;
      out.index = s < 0.5 ? i : i + 1;
      return out;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(diff[i]) < std::abs(diff[best])) best = i;
  }
  out.index = best;
  out.location_ghz = x[best];
  out.gap_ghz = std::abs(diff[best]);
  if (best == 0 || best + 1 == n) {
    out.at_boundary = true;
    return out;
  }
  const double x0 = x[best - 1], x1 = x[best], x2 = x[best + 1];
  const double y0 = std::abs(diff[best - 1]), y1 = std::abs(diff[best]),
               y2 = std::abs(diff[best + 1]);
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double c2 = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double c1 = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
  const double c0 = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 +
                     x0 * x1 * (x0 - x1) * y2) /
                    denom;
  if (c2 > 0.0) {
    const double xv = -c1 / (2.0 * c2);
    if (xv >= x0 && xv <= x2) {
      out.location_ghz = xv;
      out.gap_ghz = std::max(0.0, c0 + c1 * xv + c2 * xv * xv);
    }
  }
  return out;
}

std::string spectrum_csv(const SpectrumCurve &curve, const SystemModel &system) {
  std::ostringstream os;
  os << "f_c_ghz";
  for (const auto &l : curve.labels) os << ',' << system.label(l);
  os << '\n';
  for (Eigen::Index i = 0; i < curve.energies_ghz.rows(); ++i) {
    os << format_double(curve.frequencies_ghz[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < curve.energies_ghz.cols(); ++j) {
      os << ',' << format_double(curve.energies_ghz(i, j));
    }
    os << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory &trajectory, const SystemModel &system) {
  std::ostringstream os;
  os << "t_ns";
  for (std::size_t idx : trajectory.tracked) os << ',' << system.label(idx);
  os << ",norm\n";
  for (std::size_t r = 0; r < trajectory.times_ns.size(); ++r) {
    os << format_double(trajectory.times_ns[r]);
    for (Eigen::Index j = 0; j < trajectory.populations.cols(); ++j) {
      os << ',' << format_double(trajectory.populations(static_cast<Eigen::Index>(r), j));
    }
    os << ',' << format_double(trajectory.norms[r]) << '\n';
  }
  return os.str();
}

}  // namespace resetlab

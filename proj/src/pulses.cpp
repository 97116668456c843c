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

#include "resetlab/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "resetlab/error.hpp"
#include "resetlab/io.hpp"

namespace resetlab {

using nlohmann::json;

namespace {

constexpr double kDomainEpsilon = 1e-12;

double domain_argument(double u) { return (1.0 - 4.0 * u) * (1.0 + 4.0 * u); }

// Inverse of Delta(u) = -8 g u / sqrt(1 - 16 u^2).
double u_of_detuning(double detuning, double g) {
  return -detuning / (4.0 * std::sqrt(detuning * detuning + 4.0 * g * g));
}

}  // namespace

AdiabaticCoefficients adiabatic_coefficients(const AdiabaticPulseParams &p) {
  if (!(p.tau_ns > 0.0) || !std::isfinite(p.tau_ns)) {
    throw InvalidPulseError("adiabatic pulse needs tau > 0", "tau_ns");
  }
  if (!(p.g_ghz > 0.0) || !std::isfinite(p.g_ghz)) {
    throw InvalidPulseError("adiabatic pulse needs g > 0", "g_ghz");
  }
  if (!std::isfinite(p.f0_ghz) || !std::isfinite(p.f_tau_ghz)) {
    throw InvalidPulseError("adiabatic endpoints must be finite");
  }
  if (p.f0_ghz == 0.0 && p.f_tau_ghz == 0.0) {
    throw InvalidPulseError("adiabatic pulse with f0 = f_tau = 0 is degenerate");
  }
  AdiabaticCoefficients c;
  c.delta = -p.f0_ghz / std::sqrt(16.0 * p.f0_ghz * p.f0_ghz + 64.0 * p.g_ghz * p.g_ghz);
  const double u_tau = u_of_detuning(p.f_tau_ghz, p.g_ghz);
  c.beta = (u_tau - c.delta) / (p.g_ghz * p.tau_ns);
  // u(t) is linear, so the concave domain argument is smallest at an end.
  if (domain_argument(c.delta) <= kDomainEpsilon || domain_argument(u_tau) <= kDomainEpsilon) {
    throw InvalidPulseError("adiabatic trajectory diverges inside [0, tau]");
  }
  return c;
}

double adiabatic_detuning(const AdiabaticPulseParams &p, double t_ns) {
  const AdiabaticCoefficients c = adiabatic_coefficients(p);
  const double slack = 1e-12 * p.tau_ns;
  if (t_ns < -slack || t_ns > p.tau_ns + slack) {
    throw ValidationError("time outside the adiabatic window [0, tau]", "t_ns");
  }
  const double u = c.beta * p.g_ghz * t_ns + c.delta;
  const double arg = domain_argument(u);
  if (arg <= kDomainEpsilon) {
    throw InvalidPulseError("adiabatic trajectory diverges at t = " + format_double(t_ns) + " ns");
  }
  return -8.0 * p.g_ghz * u / std::sqrt(arg);
}

double adiabatic_zero_crossing(const AdiabaticPulseParams &p) {
  const AdiabaticCoefficients c = adiabatic_coefficients(p);
  if (c.beta == 0.0) throw InvalidPulseError("constant adiabatic trajectory has no crossing");
  return -c.delta / (c.beta * p.g_ghz);
}

double shape_duration(const Shape &shape) {
  if (const auto *s = std::get_if<SquareShape>(&shape)) return s->duration_ns;
  if (const auto *r = std::get_if<RampShape>(&shape)) return r->duration_ns;
  return std::get<AdiabaticShape>(shape).params.tau_ns;
}

double shape_offset(const Shape &shape, double t) {
  const double duration = shape_duration(shape);
  if (!(t >= 0.0) || t >= duration) return 0.0;
  if (const auto *s = std::get_if<SquareShape>(&shape)) {
    const double e = s->edge_ns;
    if (e > 0.0) {
      if (t < e) return s->amplitude_ghz * 0.5 * (1.0 - std::cos(std::numbers::pi * t / e));
      if (t > duration - e) {
        return s->amplitude_ghz * 0.5 * (1.0 - std::cos(std::numbers::pi * (duration - t) / e));
      }
    }
    return s->amplitude_ghz;
  }
  if (const auto *r = std::get_if<RampShape>(&shape)) {
    return r->start_ghz + (r->end_ghz - r->start_ghz) * (t / duration);
  }
  const auto &a = std::get<AdiabaticShape>(shape);
  return a.detuning_origin_ghz - adiabatic_detuning(a.params, t);
}

std::vector<double> shape_breakpoints(const Shape &shape) {
  const double d = shape_duration(shape);
  if (const auto *s = std::get_if<SquareShape>(&shape)) {
    if (s->edge_ns > 0.0) return {0.0, s->edge_ns, d - s->edge_ns, d};
  }
  return {0.0, d};
}

namespace {

void validate_shape(const Shape &shape) {
  if (const auto *s = std::get_if<SquareShape>(&shape)) {
    if (!(s->duration_ns > 0.0)) throw InvalidPulseError("duration must be positive", "duration_ns");
    if (!std::isfinite(s->amplitude_ghz)) throw InvalidPulseError("amplitude is not finite");
    if (s->edge_ns < 0.0 || 2.0 * s->edge_ns > s->duration_ns) {
      throw InvalidPulseError("edges must fit inside the window", "edge_ns");
    }
  } else if (const auto *r = std::get_if<RampShape>(&shape)) {
    if (!(r->duration_ns > 0.0)) throw InvalidPulseError("duration must be positive", "duration_ns");
    if (!std::isfinite(r->start_ghz) || !std::isfinite(r->end_ghz)) {
      throw InvalidPulseError("ramp endpoints are not finite");
    }
  } else {
    adiabatic_coefficients(std::get<AdiabaticShape>(shape).params);
  }
}

}  // namespace

PulseSpec::PulseSpec(std::vector<Segment> segments) {
  for (auto &s : segments) add(std::move(s));
}

PulseSpec PulseSpec::single(std::string channel, Shape shape, double start_ns) {
  PulseSpec p;
  p.add({std::move(channel), start_ns, std::move(shape)});
  return p;
}

PulseSpec &PulseSpec::add(Segment segment) {
  if (segment.channel.empty()) throw ValidationError("segment has no channel", "channel");
  if (!(segment.start_ns >= 0.0) || !std::isfinite(segment.start_ns)) {
    throw ValidationError("segment start must be non-negative", "start_ns");
  }
  validate_shape(segment.shape);
  const double begin = segment.start_ns;
  const double end = begin + shape_duration(segment.shape);
  for (const auto &other : segments_) {
    if (other.channel != segment.channel) continue;
    const double ob = other.start_ns;
    const double oe = ob + shape_duration(other.shape);
    if (begin < oe && ob < end) {
      throw ValidationError("segments on channel '" + segment.channel + "' overlap in time",
                            "start_ns");
    }
  }
  segments_.push_back(std::move(segment));
  return *this;
}

PulseSpec &PulseSpec::append(const PulseSpec &other, double offset_ns) {
  for (Segment s : other.segments_) {
    s.start_ns += offset_ns;
    add(std::move(s));
  }
  return *this;
}

double PulseSpec::duration() const {
  double d = 0.0;
  for (const auto &s : segments_) d = std::max(d, s.start_ns + shape_duration(s.shape));
  return d;
}

std::vector<std::string> PulseSpec::channels() const {
  std::vector<std::string> out;
  for (const auto &s : segments_) {
    if (std::find(out.begin(), out.end(), s.channel) == out.end()) out.push_back(s.channel);
  }
  return out;
}

std::vector<double> PulseSpec::breakpoints() const {
  std::vector<double> out;
  for (const auto &s : segments_) {
    for (double b : shape_breakpoints(s.shape)) out.push_back(s.start_ns + b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
            out.end());
  return out;
}

double sample_channel(const PulseSpec &spec, std::string_view channel, double t_ns) {
  double total = 0.0;
  for (const auto &s : spec.segments()) {
    if (s.channel == channel) total += shape_offset(s.shape, t_ns - s.start_ns);
  }
  return total;
}

FrequencyMap sample_pulse(const PulseSpec &spec, double t_ns) {
  FrequencyMap out;
  for (const auto &c : spec.channels()) out[c] = sample_channel(spec, c, t_ns);
  return out;
}

void check_channels(const SystemModel &system, const PulseSpec &spec) {
  for (const auto &c : spec.channels()) {
    auto k = system.find_mode(c);
    if (!k) throw ValidationError("pulse targets unknown mode '" + c + "'", "channel");
    if (!system.tunable(*k)) {
      throw ValidationError("pulse targets mode '" + c + "', which is not tunable", "channel");
    }
  }
}

FrequencyMap coupler_frequencies(const SystemModel &system, const PulseSpec &spec, double t_ns) {
  check_channels(system, spec);
  FrequencyMap out = idle_frequencies(system);
  for (auto &[name, f] : out) f += sample_channel(spec, name, t_ns);
  return out;
}

PulseSampler::PulseSampler(const SystemModel &system, const PulseSpec &spec) {
  check_channels(system, spec);
  const auto tunable = system.tunable_modes();
  per_mode_.resize(tunable.size());
  for (const auto &s : spec.segments()) {
    const std::size_t k = system.mode_index(s.channel);
    const auto pos = std::find(tunable.begin(), tunable.end(), k) - tunable.begin();
    per_mode_[static_cast<std::size_t>(pos)].push_back(
        {s.start_ns, s.start_ns + shape_duration(s.shape), s.shape});
  }
}

void PulseSampler::offsets(double t_ns, double *out) const {
  for (std::size_t m = 0; m < per_mode_.size(); ++m) {
    double v = 0.0;
    for (const auto &p : per_mode_[m]) {
      if (t_ns >= p.start && t_ns < p.end) v += shape_offset(p.shape, t_ns - p.start);
    }
    out[m] = v;
  }
}

namespace {

DenseMatrix instantaneous_h(const SystemModel &system, const PulseSpec &spec, double t,
                            int sector) {
  const SparseMatrix h = assemble_hamiltonian(system, coupler_frequencies(system, spec, t));
  if (sector < 0) return DenseMatrix(h);
  return excitation_block(h, system, sector).matrix;
}

Eigen::Index position_of(const SystemModel &system, const BasisState &s, int sector) {
  const std::size_t global = system.basis_index(s);
  if (sector < 0) return static_cast<Eigen::Index>(global);
  if (system.excitation(global) != sector) {
    throw ValidationError("state " + system.label(s) + " is not in sector " +
                          std::to_string(sector));
  }
  const auto idx = system.sector_indices(sector);
  return std::lower_bound(idx.begin(), idx.end(), global) - idx.begin();
}

Eigen::Index best_overlap(const DenseMatrix &vectors, const Eigen::VectorXcd &target) {
  Eigen::Index best = 0;
  double best_value = -1.0;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    const double o = std::abs(vectors.col(j).dot(target));
    if (o > best_value) {
      best_value = o;
      best = j;
    }
  }
  return best;
}

}  // namespace

AdiabaticityProfile adiabaticity_profile(const SystemModel &system, const PulseSpec &spec,
                                         const BasisState &state_a, const BasisState &state_b,
                                         const AdiabaticityOptions &options) {
  if (options.samples < 2) throw ValidationError("at least two samples are required", "samples");
  check_channels(system, spec);
  const double t0 = options.t_start_ns;
  const double t1 = options.t_stop_ns < 0.0 ? spec.duration() : options.t_stop_ns;
  if (!(t1 > t0)) throw ValidationError("empty sampling window", "t_stop_ns");
  const double h = options.fd_step_ns;

  const Eigen::Index ia = position_of(system, state_a, options.sector);
  const Eigen::Index ib = position_of(system, state_b, options.sector);
  if (ia == ib) throw ValidationError("the two states must differ");

  AdiabaticityProfile out;
  Eigen::VectorXcd prev_a, prev_b;
  const double dt = (t1 - t0) / options.samples;
  for (int i = 0; i < options.samples; ++i) {
    const double t = t0 + (i + 0.5) * dt;
    const DenseMatrix hm = instantaneous_h(system, spec, t, options.sector);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(hm);
    const DenseMatrix &v = eig.eigenvectors();
    Eigen::Index ja, jb;
    if (i == 0) {
      Eigen::VectorXcd ea = Eigen::VectorXcd::Zero(hm.rows());
      Eigen::VectorXcd eb = ea;
      ea(ia) = 1.0;
      eb(ib) = 1.0;
      ja = best_overlap(v, ea);
      jb = best_overlap(v, eb);
    } else {
      ja = best_overlap(v, prev_a);
      jb = best_overlap(v, prev_b);
    }
    if (ja == jb) {
      throw ConvergenceError("eigenstate tracking merged both states at t = " + format_double(t) +
                             " ns");
    }
    prev_a = v.col(ja);
    prev_b = v.col(jb);
    const double gap = eig.eigenvalues()(ja) - eig.eigenvalues()(jb);
    if (std::abs(gap) < 1e-12) {
      throw ConvergenceError("eigenvalue gap closes at t = " + format_double(t) + " ns");
    }
    const DenseMatrix dh = (instantaneous_h(system, spec, t + h, options.sector) -
                            instantaneous_h(system, spec, t - h, options.sector)) /
                           (2.0 * h);
    const double ratio = std::abs(prev_a.dot(dh * prev_b)) / (gap * gap);
    out.times_ns.push_back(t);
    out.ratio.push_back(ratio);
    if (ratio > out.max_ratio || i == 0) {
      out.max_ratio = ratio;
      out.time_of_max_ns = t;
    }
  }
  return out;
}

double adiabaticity_metric(const SystemModel &system, const PulseSpec &spec,
                           const BasisState &state_a, const BasisState &state_b, int samples) {
  AdiabaticityOptions o;
  o.samples = samples;
  return adiabaticity_profile(system, spec, state_a, state_b, o).max_ratio;
}

json pulse_to_json(const PulseSpec &spec) {
  json out = json::array();
  for (const auto &s : spec.segments()) {
    json j{{"channel", s.channel}, {"start_ns", s.start_ns}};
    if (const auto *q = std::get_if<SquareShape>(&s.shape)) {
      j["shape"] = "square";
      j["params"] = {{"amplitude_ghz", q->amplitude_ghz},
                     {"duration_ns", q->duration_ns},
                     {"edge_ns", q->edge_ns}};
    } else if (const auto *r = std::get_if<RampShape>(&s.shape)) {
      j["shape"] = "ramp";
      j["params"] = {{"start_ghz", r->start_ghz},
                     {"end_ghz", r->end_ghz},
                     {"duration_ns", r->duration_ns}};
    } else {
      const auto &a = std::get<AdiabaticShape>(s.shape);
      j["shape"] = "adiabatic";
      j["params"] = {{"tau_ns", a.params.tau_ns},
                     {"f0_ghz", a.params.f0_ghz},
                     {"f_tau_ghz", a.params.f_tau_ghz},
                     {"g_ghz", a.params.g_ghz},
                     {"detuning_origin_ghz", a.detuning_origin_ghz}};
    }
    out.push_back(std::move(j));
  }
  return out;
}

namespace {

double param(const json &p, const char *key, const std::string &where) {
  if (!p.contains(key) || !p.at(key).is_number()) {
    throw ValidationError("missing or non-numeric parameter", where + ".params." + key);
  }
  return p.at(key).get<double>();
}

double param_or(const json &p, const char *key, const std::string &where, double fallback) {
  return p.contains(key) ? param(p, key, where) : fallback;
}

}  // namespace

PulseSpec pulse_from_json(const json &doc, const std::string &where) {
  if (!doc.is_array()) throw ValidationError("pulse schedule must be a list", where);
  PulseSpec spec;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const json &s = doc[i];
    if (!s.is_object()) throw ValidationError("expected an object", w);
    if (!s.contains("channel") || !s.at("channel").is_string()) {
      throw ValidationError("missing channel", w + ".channel");
    }
    if (!s.contains("shape") || !s.at("shape").is_string()) {
      throw ValidationError("missing shape", w + ".shape");
    }
    const json params = s.value("params", json::object());
    const std::string kind = s.at("shape").get<std::string>();
    Shape shape;
    if (kind == "square") {
      shape = SquareShape{param(params, "amplitude_ghz", w), param(params, "duration_ns", w),
                          param_or(params, "edge_ns", w, 0.0)};
    } else if (kind == "ramp") {
      shape = RampShape{param(params, "start_ghz", w), param(params, "end_ghz", w),
                        param(params, "duration_ns", w)};
    } else if (kind == "adiabatic") {
      AdiabaticShape a;
      a.params = {param(params, "tau_ns", w), param(params, "f0_ghz", w),
                  param(params, "f_tau_ghz", w), param(params, "g_ghz", w)};
      a.detuning_origin_ghz = param(params, "detuning_origin_ghz", w);
      shape = a;
    } else {
      throw ValidationError("shape must be square, ramp or adiabatic", w + ".shape");
    }
    double start = 0.0;
    if (s.contains("start_ns")) {
      if (!s.at("start_ns").is_number()) throw ValidationError("expected a number", w + ".start_ns");
      start = s.at("start_ns").get<double>();
    }
    try {
      spec.add({s.at("channel").get<std::string>(), start, std::move(shape)});
    } catch (const InvalidPulseError &e) {
      throw InvalidPulseError(e.what(), w);
    } catch (const ValidationError &e) {
      throw ValidationError(e.what(), w);
    }
  }
  return spec;
}

std::string pulse_csv(const PulseSpec &spec, double sample_rate_gsps) {
  if (!(sample_rate_gsps > 0.0)) throw ValidationError("sample rate must be positive");
  const auto channels = spec.channels();
  std::ostringstream os;
  os << "t_ns";
  for (const auto &c : channels) os << ',' << c << "_offset_ghz";
  os << '\n';
  const double duration = spec.duration();
  const auto n = static_cast<long>(std::floor(duration * sample_rate_gsps + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_gsps;
    os << format_double(t);
    for (const auto &c : channels) os << ',' << format_double(sample_channel(spec, c, t));
    os << '\n';
  }
  return os.str();
}

}  // namespace resetlab

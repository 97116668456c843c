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

#include "resetlab/calib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "resetlab/error.hpp"
#include "resetlab/io.hpp"

namespace resetlab {

using nlohmann::json;

SweepAxis linear_axis(std::string name, std::string unit, double lo, double hi, int points) {
  if (points < 1) throw ValidationError("an axis needs at least one point", "points");
  SweepAxis a{std::move(name), std::move(unit), {}};
  for (int i = 0; i < points; ++i) {
    a.values.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
  }
  validate_axis(a);
  return a;
}

void validate_axis(const SweepAxis &axis) {
  if (axis.values.empty()) throw ValidationError("axis has no values", axis.name);
  if (axis.values.size() < 2) return;
  const bool up = axis.values[1] > axis.values[0];
  for (std::size_t i = 1; i < axis.values.size(); ++i) {
    const double step = axis.values[i] - axis.values[i - 1];
    if (!(up ? step > 0.0 : step < 0.0)) {
      throw ValidationError("axis values must be strictly monotone", axis.name);
    }
  }
}

double SweepGrid::min_error(std::size_t *i_out, std::size_t *j_out) const {
  double best = std::numeric_limits<double>::quiet_NaN();
  std::size_t bi = 0, bj = 0;
  for (Eigen::Index i = 0; i < errors.rows(); ++i) {
    for (Eigen::Index j = 0; j < errors.cols(); ++j) {
      const double v = errors(i, j);
      if (std::isnan(v)) continue;
      if (std::isnan(best) || v < best) {
        best = v;
        bi = static_cast<std::size_t>(i);
        bj = static_cast<std::size_t>(j);
      }
    }
  }
  if (i_out) *i_out = bi;
  if (j_out) *j_out = bj;
  return best;
}

SweepGrid sweep2d(const Objective &objective, const SweepAxis &axis_x, const SweepAxis &axis_y) {
  validate_axis(axis_x);
  validate_axis(axis_y);
  SweepGrid grid{axis_x, axis_y, {}, {}};
  const std::size_t nx = axis_x.values.size();
  const std::size_t ny = axis_y.values.size();
  grid.errors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny));
  std::vector<std::string> messages(nx * ny);
  parallel_for(nx * ny, [&](std::size_t k) {
    const std::size_t i = k / ny;
    const std::size_t j = k % ny;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = objective({axis_x.values[i], axis_y.values[j]});
      if (!std::isfinite(v)) {
        messages[k] = "objective returned a non-finite value";
        v = std::numeric_limits<double>::quiet_NaN();
      } else if (v < 0.0 || v > 1.0) {
        messages[k] = "objective returned " + format_double(v) + ", outside [0, 1]";
        v = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const std::exception &e) {
      messages[k] = e.what();
    }
    grid.errors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  });
  for (std::size_t k = 0; k < messages.size(); ++k) {
    if (!messages[k].empty()) {
      grid.diagnostics.push_back(std::to_string(k / ny) + "," + std::to_string(k % ny) + ": " +
                                 messages[k]);
    }
  }
  return grid;
}

LineCut line_cut(const SweepGrid &grid, char axis, double value) {
  if (grid.errors.size() == 0) throw ValidationError("grid is empty");
  if (axis != 'x' && axis != 'y') throw ValidationError("axis must be 'x' or 'y'", "axis");
  const SweepAxis &held = axis == 'x' ? grid.axis_x : grid.axis_y;
  const auto lo = std::min(held.values.front(), held.values.back());
  const auto hi = std::max(held.values.front(), held.values.back());
  if (value < lo || value > hi) throw ValidationError("cut value outside the axis range", "value");
  std::size_t best = 0;
  for (std::size_t i = 1; i < held.values.size(); ++i) {
    if (std::abs(held.values[i] - value) < std::abs(held.values[best] - value)) best = i;
  }
  LineCut cut;
  cut.axis = axis;
  cut.index = best;
  cut.value = held.values[best];
  const auto b = static_cast<Eigen::Index>(best);
  if (axis == 'x') {
    for (Eigen::Index j = 0; j < grid.errors.cols(); ++j) cut.errors.push_back(grid.errors(b, j));
  } else {
    for (Eigen::Index i = 0; i < grid.errors.rows(); ++i) cut.errors.push_back(grid.errors(i, b));
  }
  return cut;
}

OptimizerResult cmaes_minimize(const Objective &objective, const OptimizerConfig &config) {
  const std::size_t n = config.initial.size();
  if (n == 0) throw ValidationError("no parameters to optimize", "initial");
  if (config.lower.size() != n || config.upper.size() != n) {
    throw ValidationError("bounds must match the parameter count", "bounds");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(config.upper[k] > config.lower[k])) {
      throw ValidationError("upper bound must exceed lower bound", "bounds");
    }
    if (config.initial[k] < config.lower[k] || config.initial[k] > config.upper[k]) {
      throw ValidationError("initial point lies outside the bounds", "initial");
    }
  }
  if (config.population != 0 && config.population < 4) {
    throw ValidationError("population must be at least 4", "population");
  }
  if (config.max_evaluations < 1) throw ValidationError("evaluation budget must be positive");
  if (!(config.sigma0 > 0.0)) throw ValidationError("sigma0 must be positive", "sigma0");

  const auto nd = static_cast<double>(n);
  const int lambda = config.population > 0
                         ? config.population
                         : 4 + static_cast<int>(std::floor(3.0 * std::log(nd)));
  const int mu = lambda / 2;
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) weights(i) = std::log(mu + 0.5) - std::log(i + 1.0);
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();
  const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
  const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
  const double c_mu =
      std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nd + 2.0) * (nd + 2.0) + mu_eff));
  const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  // Normalized coordinates: u = (x - lower) / (upper - lower) in [0, 1].
  auto to_x = [&](const Eigen::VectorXd &u) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = config.lower[k] + u(static_cast<Eigen::Index>(k)) * (config.upper[k] - config.lower[k]);
    }
    return x;
  };
  auto safe_eval = [&](const std::vector<double> &x) {
    try {
      const double v = objective(x);
      return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    } catch (const std::exception &) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Eigen::VectorXd mean(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    mean(static_cast<Eigen::Index>(k)) =
        (config.initial[k] - config.lower[k]) / (config.upper[k] - config.lower[k]);
  }
  double sigma = config.sigma0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd basis = cov;
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  Eigen::VectorXd p_sigma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd p_c = p_sigma;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  OptimizerResult result;
  result.best_parameters = config.initial;
  result.best_value = safe_eval(config.initial);
  result.evaluations = 1;
  if (result.best_value <= config.target) {
    result.stop_reason = "target reached";
    result.history.push_back({0, 1, result.best_value, result.best_value, sigma});
    return result;
  }

  for (int generation = 1;; ++generation) {
    const int budget_left = config.max_evaluations - result.evaluations;
    if (budget_left <= 0) {
      result.stop_reason = "evaluation budget exhausted";
      break;
    }
    const int count = std::min(lambda, budget_left);
    std::vector<Eigen::VectorXd> ys(static_cast<std::size_t>(count));
    std::vector<Eigen::VectorXd> us(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) {
      bool ok = false;
      for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        Eigen::VectorXd z(static_cast<Eigen::Index>(n));
        for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = normal(rng);
        Eigen::VectorXd y = basis * scale.cwiseProduct(z);
        Eigen::VectorXd u = mean + sigma * y;
        if ((u.array() >= 0.0).all() && (u.array() <= 1.0).all()) {
          ys[static_cast<std::size_t>(s)] = y;
          us[static_cast<std::size_t>(s)] = u;
          ok = true;
        }
      }
      if (!ok) throw ConvergenceError("no feasible CMA-ES sample after 100 draws");
    }
    std::vector<double> values(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count),
                 [&](std::size_t s) { values[s] = safe_eval(to_x(us[s])); });
    result.evaluations += count;

    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
    });
    const auto best_s = static_cast<std::size_t>(order[0]);
    if (values[best_s] < result.best_value) {
      result.best_value = values[best_s];
      result.best_parameters = to_x(us[best_s]);
    }
    double mean_value = 0.0;
    int finite = 0;
    for (double v : values) {
      if (std::isfinite(v)) {
        mean_value += v;
        ++finite;
      }
    }
    mean_value = finite > 0 ? mean_value / finite : std::numeric_limits<double>::infinity();
    result.history.push_back({generation, result.evaluations, result.best_value, mean_value, sigma});

    if (result.best_value <= config.target) {
      result.stop_reason = "target reached";
      break;
    }
    if (count < lambda) {
      result.stop_reason = "evaluation budget exhausted";
      break;
    }

    // Recombination and path updates.
    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (int i = 0; i < mu; ++i) y_w += weights(i) * ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    mean += sigma * y_w;

    const Eigen::VectorXd inv_sqrt_c_y =
        basis * scale.cwiseInverse().asDiagonal() * basis.transpose() * y_w;
    p_sigma = (1.0 - c_sigma) * p_sigma + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * inv_sqrt_c_y;
    const double ps_norm = p_sigma.norm();
    const double threshold =
        (1.4 + 2.0 / (nd + 1.0)) * chi_n * std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * generation));
    const double h_sigma = ps_norm < threshold ? 1.0 : 0.0;
    p_c = (1.0 - c_c) * p_c + h_sigma * std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd &y = ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      rank_mu += weights(i) * y * y.transpose();
    }
    const double delta_h = (1.0 - h_sigma) * c_c * (2.0 - c_c);
    cov = (1.0 - c_1 - c_mu) * cov + c_1 * (p_c * p_c.transpose() + delta_h * cov) + c_mu * rank_mu;
    sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));

    cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    basis = eig.eigenvectors();
    scale = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();

    if (sigma * scale.maxCoeff() < 1e-12) {
      result.stop_reason = "step size collapsed";
      break;
    }
  }
  return result;
}

std::string grid_csv(const SweepGrid &grid) {
  std::ostringstream os;
  os << grid.axis_y.name << '\\' << grid.axis_x.name;
  for (double x : grid.axis_x.values) os << ',' << format_double(x);
  os << '\n';
  for (std::size_t j = 0; j < grid.axis_y.values.size(); ++j) {
    os << format_double(grid.axis_y.values[j]);
    for (std::size_t i = 0; i < grid.axis_x.values.size(); ++i) {
      os << ',' << format_double(grid.errors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    os << '\n';
  }
  return os.str();
}

json grid_sidecar(const SweepGrid &grid, const std::string &scenario_hash) {
  auto axis = [](const SweepAxis &a) {
    return json{{"name", a.name}, {"unit", a.unit}, {"values", a.values}};
  };
  std::size_t i = 0, j = 0;
  const double best = grid.min_error(&i, &j);
  json doc{{"axis_x", axis(grid.axis_x)},
           {"axis_y", axis(grid.axis_y)},
           {"shape", {grid.axis_x.values.size(), grid.axis_y.values.size()}},
           {"layout", "rows are axis_y values, columns are axis_x values"},
           {"scenario_hash", scenario_hash},
           {"nan_points", grid.diagnostics}};
  if (!std::isnan(best)) {
    doc["minimum"] = {{"error", best},
                      {grid.axis_x.name, grid.axis_x.values[i]},
                      {grid.axis_y.name, grid.axis_y.values[j]}};
  }
  return doc;
}

std::string history_jsonl(const OptimizerResult &result) {
  std::ostringstream os;
  for (const auto &g : result.history) {
    json j{{"generation", g.generation},
           {"evaluations", g.evaluations},
           {"best", g.best},
           {"mean", std::isfinite(g.mean) ? json(g.mean) : json(nullptr)},
           {"sigma", g.sigma}};
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace resetlab

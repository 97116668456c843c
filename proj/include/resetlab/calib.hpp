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

// Parameter sweeps and a CMA-ES minimizer for pulse calibration.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace resetlab {

/// Objective over a parameter vector. Must be pure and thread-safe.
using Objective = std::function<double(const std::vector<double> &)>;

struct SweepAxis {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// `points` evenly spaced values from lo to hi inclusive.
SweepAxis linear_axis(std::string name, std::string unit, double lo, double hi, int points);
/// Throws ValidationError unless values are non-empty and strictly monotone.
void validate_axis(const SweepAxis &axis);

struct SweepGrid {
  SweepAxis axis_x;
  SweepAxis axis_y;
  /// errors(i, j) at (axis_x.values[i], axis_y.values[j]); NaN where the
  /// objective failed.
  Eigen::MatrixXd errors;
  /// "i,j: message" for every NaN entry, in index order.
  std::vector<std::string> diagnostics;

  /// Smallest non-NaN entry and its indices.
  double min_error(std::size_t *i = nullptr, std::size_t *j = nullptr) const;
};

/// Evaluates objective({x, y}) at every grid point, concurrently. Failures
/// (exceptions, non-finite values, values outside [0, 1]) become NaN.
SweepGrid sweep2d(const Objective &objective, const SweepAxis &axis_x, const SweepAxis &axis_y);

struct LineCut {
  char axis = 'x';   ///< the axis held fixed
  std::size_t index = 0;
  double value = 0.0;  ///< grid value actually used
  std::vector<double> errors;
};

/// Holds `axis` ('x' or 'y') at the grid line nearest `value` and returns
/// the errors along the other axis.
LineCut line_cut(const SweepGrid &grid, char axis, double value);

struct OptimizerConfig {
  std::vector<double> initial;
  std::vector<double> lower;
  std::vector<double> upper;
  /// 0 selects 4 + floor(3 ln n).
  int population = 0;
  std::uint64_t seed = 1;
  int max_evaluations = 2000;
  double target = 0.0;
  /// Initial step size as a fraction of each parameter's bound width.
  double sigma0 = 0.2;
};

struct GenerationRecord {
  int generation = 0;
  int evaluations = 0;
  double best = 0.0;  ///< best so far
  double mean = 0.0;  ///< mean objective of the generation
  double sigma = 0.0;
};

struct OptimizerResult {
  std::vector<double> best_parameters;
  double best_value = 0.0;
  int evaluations = 0;
  std::string stop_reason;
  std::vector<GenerationRecord> history;
};

/// (mu/mu_w, lambda) CMA-ES in coordinates normalized to the bounds.
/// Out-of-bounds samples are redrawn (up to 100 times each). Each
/// generation is evaluated concurrently; all random draws happen before
/// evaluation, so results depend only on the seed. Objective exceptions and
/// NaN count as +inf.
OptimizerResult cmaes_minimize(const Objective &objective, const OptimizerConfig &config);

std::string grid_csv(const SweepGrid &grid);
nlohmann::json grid_sidecar(const SweepGrid &grid, const std::string &scenario_hash);
/// One JSON object per generation.
std::string history_jsonl(const OptimizerResult &result);

}  // namespace resetlab

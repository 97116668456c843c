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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace resetlab {

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double value);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::string &path, const std::string &content);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json &doc);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string &data);

/// Worker threads to use: hardware concurrency, capped by the
/// RESETLAB_THREADS environment variable when it holds a positive integer.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// runs exactly once; the first exception thrown by any body is rethrown
/// after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace resetlab

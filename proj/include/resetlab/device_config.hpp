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

// JSON device files.
//
//   {
//     "frame_ghz": 5.176,                       (optional)
//     "modes": [
//       {"name": "Q0", "kind": "transmon", "frequency_ghz": 5.176,
//        "anharmonicity_ghz": -0.256, "levels": 3, "tunable": false},
//       {"name": "R0", "kind": "resonator", "frequency_ghz": 6.752,
//        "kappa_ghz": 0.000427, "chi_ghz": 0.000132, "levels": 3}
//     ],
//     "couplings": [{"a": "Q0", "b": "R0", "g_ghz": 0.046}]
//   }

#pragma once

#include <string>

#include "json.hpp"
#include "resetlab/model.hpp"

namespace resetlab {

/// Parses a device document. Syntax errors report the line; schema errors
/// carry a field path such as "modes[2].levels".
DeviceDescription parse_device_description(const std::string &text,
                                           const std::string &source = "<string>");
DeviceDescription device_description_from_json(const nlohmann::json &doc);
nlohmann::json device_description_to_json(const DeviceDescription &description);

/// Reads, parses and validates a device file. Throws IoError when the file
/// cannot be read.
SystemModel load_device_config(const std::string &path);

/// Reads a whole file, throwing IoError on failure.
std::string read_text_file(const std::string &path);

/// Parses JSON text, turning syntax errors into ValidationError with the
/// offending line.
nlohmann::json parse_json_text(const std::string &text, const std::string &source);

}  // namespace resetlab

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

#include "resetlab/device_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "resetlab/error.hpp"

namespace resetlab {

using nlohmann::json;

namespace {

const json &require(const json &obj, const char *key, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing required field", where + "." + key);
  return *it;
}

double number(const json &obj, const char *key, const std::string &where) {
  const json &v = require(obj, key, where);
  if (!v.is_number()) throw ValidationError("expected a number", where + "." + key);
  return v.get<double>();
}

double number_or(const json &obj, const char *key, const std::string &where, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, where);
}

int integer_or(const json &obj, const char *key, const std::string &where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json &v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError("expected an integer", where + "." + key);
  return v.get<int>();
}

std::string string_field(const json &obj, const char *key, const std::string &where) {
  const json &v = require(obj, key, where);
  if (!v.is_string()) throw ValidationError("expected a string", where + "." + key);
  return v.get<std::string>();
}

}  // namespace

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file", path);
  return ss.str();
}

json parse_json_text(const std::string &text, const std::string &source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n');
    throw ValidationError("JSON syntax error at line " + std::to_string(line) + " of " + source);
  }
}

DeviceDescription device_description_from_json(const json &doc) {
  if (!doc.is_object()) throw ValidationError("device document must be an object");
  DeviceDescription d;

  const json &modes = require(doc, "modes", "");
  if (!modes.is_array()) throw ValidationError("expected a list", "modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string where = "modes[" + std::to_string(i) + "]";
    const json &m = modes[i];
    if (!m.is_object()) throw ValidationError("expected an object", where);
    ModeSpec spec;
    spec.name = string_field(m, "name", where);
    const std::string kind = string_field(m, "kind", where);
    if (kind == "transmon") {
      TransmonParams p;
      p.frequency_ghz = number(m, "frequency_ghz", where);
      p.anharmonicity_ghz = number_or(m, "anharmonicity_ghz", where, 0.0);
      p.levels = integer_or(m, "levels", where, 3);
      if (m.contains("tunable")) {
        if (!m.at("tunable").is_boolean()) {
          throw ValidationError("expected true or false", where + ".tunable");
        }
        p.tunable = m.at("tunable").get<bool>();
      }
      p.t1_us = number_or(m, "t1_us", where, 0.0);
      p.t2_star_us = number_or(m, "t2_star_us", where, 0.0);
      spec.params = p;
    } else if (kind == "resonator") {
      ResonatorParams p;
      p.frequency_ghz = number(m, "frequency_ghz", where);
      p.kappa_ghz = number_or(m, "kappa_ghz", where, 0.0);
      p.dispersive_shift_ghz = number_or(m, "chi_ghz", where, 0.0);
      p.levels = integer_or(m, "levels", where, 3);
      spec.params = p;
    } else {
      throw ValidationError("kind must be \"transmon\" or \"resonator\"", where + ".kind");
    }
    d.modes.push_back(std::move(spec));
  }

  if (doc.contains("couplings")) {
    const json &cs = doc.at("couplings");
    if (!cs.is_array()) throw ValidationError("expected a list", "couplings");
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const std::string where = "couplings[" + std::to_string(j) + "]";
      if (!cs[j].is_object()) throw ValidationError("expected an object", where);
      d.couplings.push_back({string_field(cs[j], "a", where), string_field(cs[j], "b", where),
                             number(cs[j], "g_ghz", where)});
    }
  }
  if (doc.contains("frame_ghz")) d.frame_ghz = number(doc, "frame_ghz", "");
  return d;
}

DeviceDescription parse_device_description(const std::string &text, const std::string &source) {
  return device_description_from_json(parse_json_text(text, source));
}

json device_description_to_json(const DeviceDescription &description) {
  json modes = json::array();
  for (const auto &m : description.modes) {
    json j;
    j["name"] = m.name;
    if (const auto *t = std::get_if<TransmonParams>(&m.params)) {
      j["kind"] = "transmon";
      j["frequency_ghz"] = t->frequency_ghz;
      j["anharmonicity_ghz"] = t->anharmonicity_ghz;
      j["levels"] = t->levels;
      j["tunable"] = t->tunable;
      if (t->t1_us > 0.0) j["t1_us"] = t->t1_us;
      if (t->t2_star_us > 0.0) j["t2_star_us"] = t->t2_star_us;
    } else {
      const auto &r = std::get<ResonatorParams>(m.params);
      j["kind"] = "resonator";
      j["frequency_ghz"] = r.frequency_ghz;
      j["kappa_ghz"] = r.kappa_ghz;
      j["chi_ghz"] = r.dispersive_shift_ghz;
      j["levels"] = r.levels;
    }
    modes.push_back(std::move(j));
  }
  json couplings = json::array();
  for (const auto &c : description.couplings) {
    couplings.push_back({{"a", c.mode_a}, {"b", c.mode_b}, {"g_ghz", c.g_ghz}});
  }
  json doc{{"modes", modes}, {"couplings", couplings}};
  if (description.frame_ghz) doc["frame_ghz"] = *description.frame_ghz;
  return doc;
}

SystemModel load_device_config(const std::string &path) {
  return build_system(parse_device_description(read_text_file(path), path));
}

}  // namespace resetlab

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

#include "resetlab/error.hpp"

#include <utility>

namespace resetlab {

ValidationError::ValidationError(const std::string &what, std::string field)
    : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

IoError::IoError(const std::string &what, std::string path)
    : Error(what + ": " + path), path_(std::move(path)) {}

}  // namespace resetlab

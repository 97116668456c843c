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

#include <stdexcept>
#include <string>

namespace resetlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed config, out-of-range parameter, unknown mode.
/// `field` carries a dotted path into the offending document when known.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &what, std::string field = {});
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

/// A pulse whose trajectory is undefined somewhere inside its window.
class InvalidPulseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical results failed a self-consistency check (step halving, gaps).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  IoError(const std::string &what, std::string path);
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace resetlab

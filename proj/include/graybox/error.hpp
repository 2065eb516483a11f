// Copyright 2026 The Graybox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace graybox {

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for bad or inconsistent run configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation produces a non-finite value (CLI exit code 2).
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::vector<double> snapshot = {})
      : std::runtime_error(what), snapshot_(std::move(snapshot)) {}

  /// Parameter values at the point of failure, when available.
  const std::vector<double>& snapshot() const noexcept { return snapshot_; }

 private:
  std::vector<double> snapshot_;
};

}  // namespace graybox

// Copyright 2026 The meshkit Authors.
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

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace meshkit {

using Vec3 = Eigen::Vector3d;

/// Row-major dense matrix; rows are entities (vertices, facets, points),
/// columns are channels.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

using Facet = std::array<int, 3>;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration supplied by the caller.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent mesh or map structure (e.g. out-of-range indices).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Operation invoked on missing or stale saved context.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during training or evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Emits a warning line on stderr unless warnings are silenced.
void log_warning(const std::string& message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace meshkit

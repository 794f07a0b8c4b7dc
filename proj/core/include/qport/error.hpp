// Copyright 2026 The qport Authors
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

namespace qport {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scalar parameter (negative budget, theta not summing to one, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value is outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for an exhaustive or dense method.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Price history too short to estimate returns and covariance.
class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

/// A parameterized gate references a slot without a bound value.
class BindingError : public Error {
 public:
  using Error::Error;
};

/// Required precomputed data (e.g. the ground energy) is missing.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Cost function returned a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, int iteration)
      : Error(what + " (evaluation " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

/// A run produced no usable output (e.g. every shot discarded by
/// post-selection, or an empty histogram).
class DegenerateRunError : public Error {
 public:
  using Error::Error;
};

/// File-system failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document; the message names the offending JSON path.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qport

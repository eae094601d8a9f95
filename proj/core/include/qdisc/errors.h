// Copyright 2026 The qdisc Authors
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

#ifndef QDISC_ERRORS_H_
#define QDISC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qdisc {

// Invalid input: out-of-range parameters, malformed POVMs, bad waveforms.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request the closed-form theory makes no claim about. `reason()` is a
// short machine-readable tag ("very-skewed", "insufficient-energy", ...).
class OutOfScopeError : public std::runtime_error {
 public:
  OutOfScopeError(std::string reason, const std::string& what)
      : std::runtime_error(what), reason_(std::move(reason)) {}

  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

// The objective is neither convex- nor concave-admissible.
class UnsupportedObjectiveError : public OutOfScopeError {
 public:
  explicit UnsupportedObjectiveError(const std::string& what)
      : OutOfScopeError("unsupported-objective", what) {}
};

// Numerical failure that would otherwise surface as a silent inf/nan.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdisc

#endif  // QDISC_ERRORS_H_

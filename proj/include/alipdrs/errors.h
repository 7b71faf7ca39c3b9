// Copyright 2026 The ALIP-DRS Authors
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

namespace alipdrs {

// Bad argument values (non-finite times, reversed intervals, plane mismatch)
// are reported with std::invalid_argument. The types below cover the
// remaining failure classes callers may want to tell apart.

/// Not enough samples / steps to evaluate the requested quantity.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The homogeneous step-to-step map has spectral radius >= 1.
class NotStabilizableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N1 * T_step and N2 * T_drs disagree beyond the relative tolerance.
class RatioMismatchError : public std::invalid_argument {
 public:
  RatioMismatchError(const std::string& what, double residual)
      : std::invalid_argument(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace alipdrs

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

// Scenario files.
//
// A flat key = value format with [section] headers; '#' starts a comment.
// Scalar keys may appear once per file. `term`, `sampled`, `push` and `bias`
// repeat. Unknown sections and keys are errors.
//
//   [params]        mass com_height step_duration step_width gravity
//   [drs_true]      term = <x|y> <amplitude> <period> [phase]
//                   sampled = <x|y> <spacing> <p0> <p1> ...
//   [drs_believed]  same keys; when the section is absent the believed
//                   motion equals the true one
//   [targets]       source = step_width|constant_velocity|path_tracking
//                   sagittal frontal gain_x gain_y
//                   path_origin = <x> <y>   path_velocity = <x> <y>
//   [orbit]         n1_x n2_x n1_y n2_y
//   [sim]           name duration control_tick seed random_initial_radius
//                   initial_sagittal = <pos> <mom>
//                   initial_frontal = <pos> <mom>
//                   initial_support = left|right
//   [disturbances]  push = <t> <sagittal|frontal> <delta_L>
//                   bias = <t1> <t2> <sagittal|frontal> <rate>

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alipdrs/sim.h"

namespace alipdrs {

class ParseError : public std::runtime_error {
 public:
  /// Line and column are 1-based; 0 when no position applies.
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

Scenario ParseScenario(std::string_view text);
Scenario LoadScenario(const std::filesystem::path& path);

/// Canonical text form; every float is written with 17 significant digits so
/// ParseScenario(SerializeScenario(s)) == s.
std::string SerializeScenario(const Scenario& scenario);

/// case_a .. case_d (simulation cases) and exp_a .. exp_d (experiment cases).
const std::vector<std::string>& PresetNames();
/// Throws std::invalid_argument for an unknown name.
Scenario Preset(std::string_view name);

}  // namespace alipdrs

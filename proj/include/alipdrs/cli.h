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

#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "alipdrs/sim.h"

namespace alipdrs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // usage, parse and ratio-mismatch errors
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitNumerical = 3;

/// Header: t,x_SC,L_yS,y_SC,L_xS,s,support,event_flags,u_x,u_y
std::string TraceCsv(const SimTrace& trace);
std::string MetricsText(const Scenario& scenario, const SimTrace& trace, const Metrics& m);
std::string StatusJson(const Scenario& scenario, const SimTrace& trace, const Metrics* m);
/// Header: delta_A,delta_t,avg_velocity,bounded,steps_to_converge,error
std::string SweepCsv(std::span<const SweepCell> cells);

/// Parses "0,0.013,0.026". Throws std::invalid_argument on bad numbers.
std::vector<double> ParseGridList(const std::string& text);
/// Drops repeated values (first occurrence wins). Returns true if any were
/// dropped.
bool DeduplicateGrid(std::vector<double>& values);

/// Writes every file to a temporary name in `dir` and renames them into place
/// only after all writes succeeded. Creates `dir` if needed.
void WriteFilesAtomically(const std::filesystem::path& dir,
                          const std::map<std::string, std::string>& files);

int CmdSimulate(const Scenario& scenario, const std::filesystem::path& out_dir,
                std::ostream& log);
int CmdStability(const Scenario& scenario, std::ostream& out);
int CmdSweep(const Scenario& scenario, std::vector<double> delta_amplitude,
             std::vector<double> delta_time, const std::filesystem::path& out_dir,
             std::ostream& log);

/// Entry point of the alipdrs tool. Subcommands: simulate, stability, sweep.
int CliMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alipdrs

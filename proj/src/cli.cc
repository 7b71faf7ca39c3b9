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

#include "alipdrs/cli.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "alipdrs/config.h"
#include "alipdrs/errors.h"

namespace alipdrs {
namespace {

std::string F(double v) { return fmt::format("{:.17g}", v); }

std::string Complex(std::complex<double> z) {
  return fmt::format("{:.17g}{:+.17g}i", z.real(), z.imag());
}

std::string MatrixRows(const Eigen::Matrix2d& m) {
  return fmt::format("[[{}, {}], [{}, {}]]", F(m(0, 0)), F(m(0, 1)), F(m(1, 0)), F(m(1, 1)));
}

}  // namespace

std::string TraceCsv(const SimTrace& trace) {
  std::string out = "t,x_SC,L_yS,y_SC,L_xS,s,support,event_flags,u_x,u_y\n";
  out.reserve(out.size() + trace.samples.size() * 200);
  for (const auto& s : trace.samples) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", F(s.t), F(s.sagittal.pos),
                       F(s.sagittal.mom), F(s.frontal.pos), F(s.frontal.mom), F(s.phase),
                       ToString(s.support), s.flags, F(s.command.u_x), F(s.command.u_y));
  }
  return out;
}

std::string MetricsText(const Scenario& scenario, const SimTrace& trace, const Metrics& m) {
  std::string out;
  out += fmt::format("scenario = {}\n", scenario.name);
  out += fmt::format("status = {}\n", ToString(trace.status));
  out += fmt::format("impact_events = {}\n", trace.events.size());
  out += fmt::format("window = {}\n", F(m.window));
  out += fmt::format("avg_forward_velocity = {}\n", F(m.avg_forward_velocity));
  out += fmt::format("target_velocity = {}\n", F(m.target_velocity));
  out += fmt::format("velocity_error = {}\n", F(m.velocity_error));
  out += fmt::format("max_state_norm = {}\n", F(m.max_state_norm));
  out += fmt::format("bounded = {}\n", m.bounded);
  out += fmt::format("converged = {}\n", m.converged);
  out += fmt::format("steps_to_converge = {}\n", m.steps_to_converge);
  return out;
}

std::string StatusJson(const Scenario& scenario, const SimTrace& trace, const Metrics* m) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario.name;
  j["status"] = std::string(ToString(trace.status));
  j["samples"] = trace.samples.size();
  j["impact_events"] = trace.events.size();
  j["duration"] = scenario.duration;
  if (trace.status == SimStatus::kDiverged) j["diverged_at"] = trace.diverged_at;
  if (m) {
    j["metrics"] = {{"avg_forward_velocity", m->avg_forward_velocity},
                    {"target_velocity", m->target_velocity},
                    {"velocity_error", m->velocity_error},
                    {"max_state_norm", m->max_state_norm},
                    {"bounded", m->bounded},
                    {"converged", m->converged},
                    {"steps_to_converge", m->steps_to_converge}};
  } else {
    j["metrics"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string SweepCsv(std::span<const SweepCell> cells) {
  std::string out = "delta_A,delta_t,avg_velocity,bounded,steps_to_converge,error\n";
  for (const auto& c : cells) {
    const bool ok = c.error.empty();
    std::string err = c.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += fmt::format("{},{},{},{},{},{}\n", F(c.delta_amplitude), F(c.delta_time),
                       ok ? F(c.metrics.avg_forward_velocity) : std::string("nan"),
                       ok && c.status == SimStatus::kOk ? 1 : 0,
                       ok ? c.metrics.steps_to_converge : -1, err);
  }
  return out;
}

std::vector<double> ParseGridList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty grid entry");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) {
      throw std::invalid_argument(fmt::format("bad grid value '{}'", item));
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty grid list");
  return out;
}

bool DeduplicateGrid(std::vector<double>& values) {
  std::vector<double> kept;
  for (double v : values) {
    if (std::find(kept.begin(), kept.end(), v) == kept.end()) kept.push_back(v);
  }
  const bool dropped = kept.size() != values.size();
  values = std::move(kept);
  return dropped;
}

void WriteFilesAtomically(const std::filesystem::path& dir,
                          const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& [name, content] : files) {
      const fs::path tmp = dir / ("." + name + ".tmp");
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      staged.emplace_back(tmp, dir / name);
      f.write(content.data(), static_cast<std::streamsize>(content.size()));
      f.close();
      if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", tmp.string()));
    }
  } catch (...) {
    for (const auto& [tmp, final_path] : staged) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
    throw;
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

int CmdSimulate(const Scenario& scenario, const std::filesystem::path& out_dir,
                std::ostream& log) {
  const SimTrace trace = Run(scenario);
  std::optional<Metrics> metrics;
  std::string metrics_error;
  try {
    metrics = ScenarioMetrics(scenario, trace);
  } catch (const InsufficientDataError& e) {
    metrics_error = e.what();
  }
  std::map<std::string, std::string> files;
  files["trace.csv"] = TraceCsv(trace);
  files["metrics.txt"] = metrics ? MetricsText(scenario, trace, *metrics)
                                 : fmt::format("status = {}\nmetrics_error = {}\n",
                                               ToString(trace.status), metrics_error);
  files["status.json"] = StatusJson(scenario, trace, metrics ? &*metrics : nullptr);
  WriteFilesAtomically(out_dir, files);

  log << fmt::format("{}: {} samples, {} impact events, status {}\n", scenario.name,
                     trace.samples.size(), trace.events.size(), ToString(trace.status));
  if (metrics) {
    log << fmt::format("avg forward velocity {:.6g} m/s (target {:.6g})\n",
                       metrics->avg_forward_velocity, metrics->target_velocity);
  }
  if (trace.status == SimStatus::kDiverged) return kExitDiverged;
  if (!metrics) {
    log << "metrics unavailable: " << metrics_error << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int CmdStability(const Scenario& scenario, std::ostream& out) {
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const OrbitSpec& spec = scenario.orbit(plane);
    const StabilityReport r = CertifyStability(scenario.params, plane, spec.n1);
    out << fmt::format("[{}]\n", ToString(plane));
    out << fmt::format("n1 = {}\nn2 = {}\n", spec.n1, spec.n2);
    out << fmt::format("monodromy_single = {}\n", MatrixRows(r.m_single));
    out << fmt::format("monodromy_general = {}\n", MatrixRows(r.m_general));
    out << fmt::format("trace = {}\ndeterminant = {}\n", F(r.characteristic.trace),
                       F(r.characteristic.det));
    out << fmt::format("eigenvalues = {}, {}\n", Complex(r.eigenvalues[0]),
                       Complex(r.eigenvalues[1]));
    out << fmt::format("numeric_spectral_radius = {}\n", F(r.numeric_spectral_radius));
    out << fmt::format("nilpotency_residual = {}\n", F(r.nilpotency_residual));
    out << fmt::format("verdict = {}\n",
                       r.verdict == Verdict::kCertified ? "certified" : "not_certified");
    if (scenario.targets.source == TargetSource::kPathTracking) {
      out << "orbit = none (path-tracking targets)\n\n";
      continue;
    }
    const PeriodicOrbit orbit = ScenarioOrbit(scenario, plane);
    for (int j = 0; j < orbit.n1(); ++j) {
      const auto& a = orbit.anchors()[static_cast<std::size_t>(j)];
      out << fmt::format("anchor[{}] = {} {}\n", j, F(a[0]), F(a[1]));
    }
    out << "\n";
    if (r.verdict != Verdict::kCertified) return kExitNumerical;
  }
  return kExitOk;
}

int CmdSweep(const Scenario& scenario, std::vector<double> delta_amplitude,
             std::vector<double> delta_time, const std::filesystem::path& out_dir,
             std::ostream& log) {
  if (DeduplicateGrid(delta_amplitude)) log << "warning: duplicate delta_A values dropped\n";
  if (DeduplicateGrid(delta_time)) log << "warning: duplicate delta_t values dropped\n";
  const auto cells = UncertaintySweep(scenario, delta_amplitude, delta_time);
  WriteFilesAtomically(out_dir, {{"sweep.csv", SweepCsv(cells)}});
  const auto bounded = std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) {
    return c.error.empty() && c.status == SimStatus::kOk;
  });
  log << fmt::format("{} cells, {} bounded\n", cells.size(), bounded);
  return kExitOk;
}

int CliMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Footstep control on dynamic rigid surfaces (reduced-order model)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::string grid_da = "0,0.013,0.026,0.04";
  std::string grid_dt = "0,0.13,0.26,0.4";

  auto add_scenario_flags = [&](CLI::App* cmd) {
    auto* c = cmd->add_option("--config", config_path, "scenario file");
    auto* p = cmd->add_option("--preset", preset, "named preset (case_a..case_d, exp_a..exp_d)");
    c->excludes(p);
    cmd->add_option("--duration", duration, "override simulated duration [s]");
    cmd->add_option("--seed", seed, "override the random seed");
  };
  auto* simulate = app.add_subcommand("simulate", "run one scenario and write trace files");
  add_scenario_flags(simulate);
  simulate->add_option("--out", out_dir, "output directory");
  auto* stability = app.add_subcommand("stability", "print monodromy and orbit anchors");
  add_scenario_flags(stability);
  auto* sweep = app.add_subcommand("sweep", "believed-motion uncertainty grid");
  add_scenario_flags(sweep);
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--grid-da", grid_da, "comma-separated amplitude offsets [m]");
  sweep->add_option("--grid-dt", grid_dt, "comma-separated time offsets [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (config_path.empty() == preset.empty()) {
      err << "error: give exactly one of --config or --preset\n";
      return kExitUsage;
    }
    Scenario scenario = preset.empty() ? LoadScenario(config_path) : Preset(preset);
    if (duration) scenario.duration = *duration;
    if (seed) scenario.seed = *seed;
    scenario.Validate();

    if (*simulate) return CmdSimulate(scenario, out_dir, err);
    if (*stability) return CmdStability(scenario, out);
    return CmdSweep(scenario, ParseGridList(grid_da), ParseGridList(grid_dt), out_dir, err);
  } catch (const ParseError& e) {
    err << fmt::format("parse error at line {}, column {}: {}\n", e.line(), e.column(),
                       e.message());
    return kExitUsage;
  } catch (const RatioMismatchError& e) {
    err << fmt::format("error: {} (relative residual {:.6g})\n", e.what(), e.residual());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace alipdrs

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

#include "alipdrs/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace alipdrs {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  int column = 0;
};

struct Entry {
  std::string key;
  std::vector<Token> values;
  int line = 0;
  int key_column = 0;
};

const std::map<std::string, std::set<std::string>, std::less<>>& Schema() {
  static const std::map<std::string, std::set<std::string>, std::less<>> schema = {
      {"params", {"mass", "com_height", "step_duration", "step_width", "gravity"}},
      {"drs_true", {"term", "sampled"}},
      {"drs_believed", {"term", "sampled"}},
      {"targets",
       {"source", "sagittal", "frontal", "gain_x", "gain_y", "path_origin", "path_velocity"}},
      {"orbit", {"n1_x", "n2_x", "n1_y", "n2_y"}},
      {"sim",
       {"name", "duration", "control_tick", "seed", "random_initial_radius",
        "initial_sagittal", "initial_frontal", "initial_support"}},
      {"disturbances", {"push", "bias"}},
  };
  return schema;
}

bool Repeatable(std::string_view key) {
  return key == "term" || key == "sampled" || key == "push" || key == "bias";
}

std::vector<Token> Split(std::string_view s, int column_offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    out.push_back({s.substr(start, i - start), column_offset + static_cast<int>(start) + 1});
  }
  return out;
}

class Reader {
 public:
  Reader(const std::map<std::string, std::vector<Entry>, std::less<>>& sections,
         std::map<std::string, int, std::less<>> section_lines)
      : sections_(sections), section_lines_(std::move(section_lines)) {}

  bool Has(std::string_view section) const { return sections_.contains(section); }
  int SectionLine(std::string_view section) const {
    auto it = section_lines_.find(section);
    return it == section_lines_.end() ? 0 : it->second;
  }

  std::vector<const Entry*> All(std::string_view section, std::string_view key) const {
    std::vector<const Entry*> out;
    auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& e : it->second) {
      if (e.key == key) out.push_back(&e);
    }
    return out;
  }

  const Entry* One(std::string_view section, std::string_view key) const {
    auto all = All(section, key);
    return all.empty() ? nullptr : all.front();
  }

 private:
  const std::map<std::string, std::vector<Entry>, std::less<>>& sections_;
  std::map<std::string, int, std::less<>> section_lines_;
};

[[noreturn]] void Fail(const Entry& e, const Token* t, const std::string& msg) {
  throw ParseError(msg, e.line, t ? t->column : e.key_column);
}

void RequireCount(const Entry& e, std::size_t lo, std::size_t hi) {
  if (e.values.size() < lo || e.values.size() > hi) {
    const std::string expect =
        lo == hi ? std::to_string(lo) : fmt::format("{} to {}", lo, hi);
    Fail(e, e.values.empty() ? nullptr : &e.values.front(),
         fmt::format("'{}' expects {} value(s), got {}", e.key, expect, e.values.size()));
  }
}

double Number(const Entry& e, const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    Fail(e, &t, fmt::format("'{}' is not a finite number", t.text));
  }
  return v;
}

long long Integer(const Entry& e, const Token& t) {
  long long v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    Fail(e, &t, fmt::format("'{}' is not an integer", t.text));
  }
  return v;
}

Axis ParseAxis(const Entry& e, const Token& t) {
  if (t.text == "x") return Axis::kX;
  if (t.text == "y") return Axis::kY;
  Fail(e, &t, fmt::format("axis must be x or y, got '{}'", t.text));
}

Plane ParsePlane(const Entry& e, const Token& t) {
  if (t.text == "sagittal") return Plane::kSagittal;
  if (t.text == "frontal") return Plane::kFrontal;
  Fail(e, &t, fmt::format("plane must be sagittal or frontal, got '{}'", t.text));
}

double Scalar(const Reader& r, std::string_view section, std::string_view key, double dflt) {
  const Entry* e = r.One(section, key);
  if (!e) return dflt;
  RequireCount(*e, 1, 1);
  return Number(*e, e->values[0]);
}

int PositiveInt(const Reader& r, std::string_view section, std::string_view key, int dflt) {
  const Entry* e = r.One(section, key);
  if (!e) return dflt;
  RequireCount(*e, 1, 1);
  const long long v = Integer(*e, e->values[0]);
  if (v < 1 || v > 1000000) Fail(*e, &e->values[0], fmt::format("'{}' must be positive", key));
  return static_cast<int>(v);
}

Eigen::Vector2d Pair(const Reader& r, std::string_view section, std::string_view key,
                     Eigen::Vector2d dflt) {
  const Entry* e = r.One(section, key);
  if (!e) return dflt;
  RequireCount(*e, 2, 2);
  return {Number(*e, e->values[0]), Number(*e, e->values[1])};
}

DrsMotion ParseMotion(const Reader& r, std::string_view section) {
  std::vector<SinusoidTerm> terms;
  std::vector<SampledProfile> profiles;
  const Entry* first = nullptr;
  for (const Entry* e : r.All(section, "term")) {
    if (!first) first = e;
    RequireCount(*e, 3, 4);
    SinusoidTerm term;
    term.axis = ParseAxis(*e, e->values[0]);
    term.amplitude = Number(*e, e->values[1]);
    term.period = Number(*e, e->values[2]);
    term.phase = e->values.size() == 4 ? Number(*e, e->values[3]) : 0.0;
    terms.push_back(term);
  }
  for (const Entry* e : r.All(section, "sampled")) {
    if (!first) first = e;
    RequireCount(*e, 2, 1u << 20);
    SampledProfile p;
    p.axis = ParseAxis(*e, e->values[0]);
    p.spacing = Number(*e, e->values[1]);
    for (std::size_t i = 2; i < e->values.size(); ++i) {
      p.positions.push_back(Number(*e, e->values[i]));
    }
    profiles.push_back(std::move(p));
  }
  try {
    return DrsMotion(std::move(terms), std::move(profiles));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(fmt::format("[{}]: {}", section, ex.what()), first ? first->line : 0, 1);
  }
}

TargetSource ParseSource(const Entry& e) {
  RequireCount(e, 1, 1);
  const auto& t = e.values[0];
  if (t.text == "step_width") return TargetSource::kStepWidth;
  if (t.text == "constant_velocity") return TargetSource::kConstantVelocity;
  if (t.text == "path_tracking") return TargetSource::kPathTracking;
  Fail(e, &t, fmt::format("unknown target source '{}'", t.text));
}

std::string_view SourceKeyword(TargetSource s) {
  switch (s) {
    case TargetSource::kStepWidth:
      return "step_width";
    case TargetSource::kConstantVelocity:
      return "constant_velocity";
    case TargetSource::kPathTracking:
      return "path_tracking";
  }
  return "step_width";
}

std::string_view PlaneKeyword(Plane p) {
  return p == Plane::kSagittal ? "sagittal" : "frontal";
}

std::string F(double v) { return fmt::format("{:.17g}", v); }

void WriteMotion(std::string& out, std::string_view section, const DrsMotion& m) {
  out += fmt::format("\n[{}]\n", section);
  for (const auto& t : m.terms()) {
    out += fmt::format("term = {} {} {} {}\n", t.axis == Axis::kX ? "x" : "y", F(t.amplitude),
                       F(t.period), F(t.phase));
  }
  for (const auto& p : m.profiles()) {
    out += fmt::format("sampled = {} {}", p.axis == Axis::kX ? "x" : "y", F(p.spacing));
    for (double v : p.positions) out += " " + F(v);
    out += "\n";
  }
}

}  // namespace

Scenario ParseScenario(std::string_view text) {
  std::map<std::string, std::vector<Entry>, std::less<>> sections;
  std::map<std::string, int, std::less<>> section_lines;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == line.npos) continue;
    const int col = static_cast<int>(first) + 1;

    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == line.npos || line.find_first_not_of(" \t", close + 1) != line.npos) {
        throw ParseError("malformed section header", line_no, col);
      }
      std::string name(line.substr(first + 1, close - first - 1));
      if (!Schema().contains(name)) {
        throw ParseError(fmt::format("unknown section [{}]", name), line_no, col + 1);
      }
      if (section_lines.contains(name)) {
        throw ParseError(fmt::format("section [{}] appears twice", name), line_no, col);
      }
      section_lines[name] = line_no;
      sections[name];
      current = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == line.npos) throw ParseError("expected 'key = value'", line_no, col);
    if (current.empty()) throw ParseError("key outside of any section", line_no, col);
    std::string_view key = line.substr(first, eq - first);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.remove_suffix(1);
    if (key.empty()) throw ParseError("missing key", line_no, col);
    const auto& allowed = Schema().find(current)->second;
    if (!allowed.contains(std::string(key))) {
      throw ParseError(fmt::format("unknown key '{}' in [{}]", key, current), line_no, col);
    }
    Entry e;
    e.key = std::string(key);
    e.line = line_no;
    e.key_column = col;
    e.values = Split(line.substr(eq + 1), static_cast<int>(eq) + 1);
    if (e.values.empty()) {
      throw ParseError(fmt::format("'{}' has no value", key), line_no, static_cast<int>(eq) + 2);
    }
    auto& entries = sections[current];
    if (!Repeatable(key)) {
      for (const auto& prev : entries) {
        if (prev.key == key) {
          throw ParseError(fmt::format("duplicate key '{}'", key), line_no, col);
        }
      }
    }
    entries.push_back(std::move(e));
  }

  Reader r(sections, section_lines);
  Scenario s;

  try {
    const AlipParams d = AlipParams::Digit();
    s.params = AlipParams(Scalar(r, "params", "mass", d.mass()),
                          Scalar(r, "params", "com_height", d.com_height()),
                          Scalar(r, "params", "step_duration", d.step_duration()),
                          Scalar(r, "params", "step_width", d.step_width()),
                          Scalar(r, "params", "gravity", d.gravity()));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(fmt::format("[params]: {}", ex.what()), r.SectionLine("params"), 1);
  }

  s.drs_true = ParseMotion(r, "drs_true");
  s.drs_believed = r.Has("drs_believed") ? ParseMotion(r, "drs_believed") : s.drs_true;

  if (const Entry* e = r.One("targets", "source")) s.targets.source = ParseSource(*e);
  s.targets.sagittal = Scalar(r, "targets", "sagittal", 0.0);
  s.targets.frontal = Scalar(r, "targets", "frontal", 0.0);
  s.targets.gain_x = Scalar(r, "targets", "gain_x", 0.0);
  s.targets.gain_y = Scalar(r, "targets", "gain_y", 0.0);
  s.targets.path_origin = Pair(r, "targets", "path_origin", Eigen::Vector2d::Zero());
  s.targets.path_velocity = Pair(r, "targets", "path_velocity", Eigen::Vector2d::Zero());

  s.orbit_x = {PositiveInt(r, "orbit", "n1_x", 1), PositiveInt(r, "orbit", "n2_x", 1)};
  s.orbit_y = {PositiveInt(r, "orbit", "n1_y", 2), PositiveInt(r, "orbit", "n2_y", 1)};

  if (const Entry* e = r.One("sim", "name")) {
    RequireCount(*e, 1, 1);
    s.name = std::string(e->values[0].text);
  }
  s.duration = Scalar(r, "sim", "duration", s.duration);
  s.control_tick = Scalar(r, "sim", "control_tick", s.control_tick);
  s.random_initial_radius = Scalar(r, "sim", "random_initial_radius", 0.0);
  if (const Entry* e = r.One("sim", "seed")) {
    RequireCount(*e, 1, 1);
    const long long v = Integer(*e, e->values[0]);
    if (v < 0) Fail(*e, &e->values[0], "seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(v);
  }
  const Eigen::Vector2d is = Pair(r, "sim", "initial_sagittal", Eigen::Vector2d::Zero());
  const Eigen::Vector2d ifr = Pair(r, "sim", "initial_frontal", Eigen::Vector2d::Zero());
  s.initial_sagittal = PlanarState::FromVector(is, Plane::kSagittal);
  s.initial_frontal = PlanarState::FromVector(ifr, Plane::kFrontal);
  if (const Entry* e = r.One("sim", "initial_support")) {
    RequireCount(*e, 1, 1);
    const auto& t = e->values[0];
    if (t.text == "left") {
      s.initial_support = SupportSide::kLeft;
    } else if (t.text == "right") {
      s.initial_support = SupportSide::kRight;
    } else {
      Fail(*e, &t, "initial_support must be left or right");
    }
  }

  for (const Entry* e : r.All("disturbances", "push")) {
    RequireCount(*e, 3, 3);
    s.disturbances.push_back(Disturbance::Push(ParsePlane(*e, e->values[1]),
                                               Number(*e, e->values[0]),
                                               Number(*e, e->values[2])));
  }
  for (const Entry* e : r.All("disturbances", "bias")) {
    RequireCount(*e, 4, 4);
    const double t1 = Number(*e, e->values[0]);
    const double t2 = Number(*e, e->values[1]);
    if (t2 < t1) Fail(*e, &e->values[1], "bias window end precedes its start");
    s.disturbances.push_back(Disturbance::LoadBias(ParsePlane(*e, e->values[2]), t1, t2,
                                                   Number(*e, e->values[3])));
  }

  try {
    s.Validate();
  } catch (const std::invalid_argument& ex) {
    throw ParseError(fmt::format("[sim]: {}", ex.what()), r.SectionLine("sim"), 1);
  }
  return s;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot read '{}'", path.string()), 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str());
}

std::string SerializeScenario(const Scenario& s) {
  std::string out;
  const auto& p = s.params;
  out += fmt::format(
      "[params]\nmass = {}\ncom_height = {}\nstep_duration = {}\nstep_width = {}\n"
      "gravity = {}\n",
      F(p.mass()), F(p.com_height()), F(p.step_duration()), F(p.step_width()), F(p.gravity()));
  WriteMotion(out, "drs_true", s.drs_true);
  WriteMotion(out, "drs_believed", s.drs_believed);
  const auto& t = s.targets;
  out += fmt::format(
      "\n[targets]\nsource = {}\nsagittal = {}\nfrontal = {}\ngain_x = {}\ngain_y = {}\n"
      "path_origin = {} {}\npath_velocity = {} {}\n",
      SourceKeyword(t.source), F(t.sagittal), F(t.frontal), F(t.gain_x), F(t.gain_y),
      F(t.path_origin[0]), F(t.path_origin[1]), F(t.path_velocity[0]), F(t.path_velocity[1]));
  out += fmt::format("\n[orbit]\nn1_x = {}\nn2_x = {}\nn1_y = {}\nn2_y = {}\n", s.orbit_x.n1,
                     s.orbit_x.n2, s.orbit_y.n1, s.orbit_y.n2);
  out += fmt::format(
      "\n[sim]\nname = {}\nduration = {}\ncontrol_tick = {}\nseed = {}\n"
      "random_initial_radius = {}\ninitial_sagittal = {} {}\ninitial_frontal = {} {}\n"
      "initial_support = {}\n",
      s.name, F(s.duration), F(s.control_tick), s.seed, F(s.random_initial_radius),
      F(s.initial_sagittal.pos), F(s.initial_sagittal.mom), F(s.initial_frontal.pos),
      F(s.initial_frontal.mom), s.initial_support == SupportSide::kLeft ? "left" : "right");
  out += "\n[disturbances]\n";
  // Pushes first, then biases, matching the order ParseScenario rebuilds.
  for (const auto& d : s.disturbances) {
    if (d.kind == Disturbance::Kind::kPush) {
      out += fmt::format("push = {} {} {}\n", F(d.t_start), PlaneKeyword(d.plane),
                         F(d.magnitude));
    }
  }
  for (const auto& d : s.disturbances) {
    if (d.kind == Disturbance::Kind::kLoadBias) {
      out += fmt::format("bias = {} {} {} {}\n", F(d.t_start), F(d.t_end),
                         PlaneKeyword(d.plane), F(d.magnitude));
    }
  }
  return out;
}

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> names = {"case_a", "case_b", "case_c", "case_d",
                                                 "exp_a",  "exp_b",  "exp_c",  "exp_d"};
  return names;
}

Scenario Preset(std::string_view name) {
  auto sway = [](Axis axis, double amplitude, double period) {
    return SinusoidTerm{axis, amplitude, period, 0.0};
  };
  Scenario s;
  s.name = std::string(name);
  s.targets.source = TargetSource::kStepWidth;
  std::vector<SinusoidTerm> terms;
  if (name == "case_a") {
    terms = {sway(Axis::kX, 0.04, 0.4)};
    s.targets.sagittal = 4.1;
    s.orbit_x = {1, 1};
    s.orbit_y = {2, 1};
  } else if (name == "case_b") {
    terms = {sway(Axis::kX, 0.14, 6.0)};
    s.targets.sagittal = 12.5;
    s.orbit_x = {15, 1};
    s.orbit_y = {2, 1};
  } else if (name == "case_c") {
    terms = {sway(Axis::kY, 0.06, 0.72)};
    s.targets.sagittal = 0.0;
    s.orbit_x = {1, 1};
    // 9 steps span 5 surface periods; the step-width alternation doubles it.
    s.orbit_y = {18, 10};
  } else if (name == "case_d") {
    terms = {sway(Axis::kX, 0.04, 0.4), sway(Axis::kY, 0.1, 6.0)};
    s.targets.sagittal = 6.27;
    s.orbit_x = {1, 1};
    s.orbit_y = {30, 2};
  } else if (name == "exp_a") {
    terms = {sway(Axis::kY, 0.04, 6.8)};
    s.orbit_x = {1, 1};
    s.orbit_y = {34, 2};
  } else if (name == "exp_b") {
    terms = {sway(Axis::kY, 0.04, 5.6)};
    s.orbit_x = {1, 1};
    s.orbit_y = {14, 1};
  } else if (name == "exp_c") {
    terms = {sway(Axis::kX, 0.04, 6.8)};
    s.orbit_x = {17, 1};
    s.orbit_y = {2, 1};
  } else if (name == "exp_d") {
    terms = {sway(Axis::kX, 0.04, 5.6)};
    s.orbit_x = {14, 1};
    s.orbit_y = {2, 1};
  } else {
    throw std::invalid_argument(fmt::format("unknown preset '{}'", name));
  }
  s.drs_true = DrsMotion(terms);
  s.drs_believed = s.drs_true;
  const double t_sys =
      std::max(s.orbit_x.n1, s.orbit_y.n1) * s.params.step_duration();
  s.duration = std::max(10.0, 3.0 * t_sys);
  return s;
}

}  // namespace alipdrs

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

// Closed-loop simulation of the reduced-order walker. The plant is the
// pendulum itself driven by the true surface motion; the footstep planner
// runs every control tick against the surface motion it believes in. Landings
// happen on the fixed schedule T_k = k * T_step.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alipdrs/footstep.h"
#include "alipdrs/model.h"
#include "alipdrs/stability.h"

namespace alipdrs {

struct Disturbance {
  enum class Kind { kNone, kPush, kLoadBias };

  Kind kind = Kind::kNone;
  Plane plane = Plane::kSagittal;
  double t_start = 0.0;    // push time, or start of the bias window
  double t_end = 0.0;      // end of the bias window (unused for pushes)
  double magnitude = 0.0;  // push: delta L [kg m^2/s]; bias: dL/dt offset [kg m^2/s^2]

  static Disturbance Push(Plane plane, double t, double delta_momentum) {
    return {Kind::kPush, plane, t, t, delta_momentum};
  }
  static Disturbance LoadBias(Plane plane, double t_start, double t_end, double rate) {
    return {Kind::kLoadBias, plane, t_start, t_end, rate};
  }
  bool operator==(const Disturbance&) const = default;
};

/// Least-period bookkeeping for one axis: n1 * T_step = n2 * T_drs.
struct OrbitSpec {
  int n1 = 1;
  int n2 = 1;
  bool operator==(const OrbitSpec&) const = default;
};

struct Scenario {
  std::string name = "custom";
  AlipParams params = AlipParams::Digit();
  DrsMotion drs_true;
  DrsMotion drs_believed;
  TargetSpec targets;
  OrbitSpec orbit_x;
  OrbitSpec orbit_y{2, 1};
  double duration = 10.0;        // s
  double control_tick = 1e-3;    // s
  std::vector<Disturbance> disturbances;
  PlanarState initial_sagittal{0.0, 0.0, Plane::kSagittal};
  PlanarState initial_frontal{0.0, 0.0, Plane::kFrontal};
  SupportSide initial_support = SupportSide::kRight;
  /// When > 0 the initial states are drawn uniformly from [-r, r] per
  /// component using `seed`, replacing the fixed initial states.
  double random_initial_radius = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument if the control tick does not divide T_step
  /// (1e-9), the duration is not positive, or a disturbance is malformed.
  void Validate() const;
  const OrbitSpec& orbit(Plane plane) const {
    return plane == Plane::kSagittal ? orbit_x : orbit_y;
  }

  bool operator==(const Scenario&) const = default;
};

struct TraceSample {
  double t = 0.0;
  PlanarState sagittal{0.0, 0.0, Plane::kSagittal};
  PlanarState frontal{0.0, 0.0, Plane::kFrontal};
  double phase = 0.0;
  SupportSide support = SupportSide::kRight;
  /// Bit 0: landing at this instant (state is post-impact). Bit 1: push
  /// applied since the previous sample. Bit 2: load bias active.
  unsigned flags = 0;
  FootstepCommand command;                                 // latest command
  Eigen::Vector2d com_world = Eigen::Vector2d::Zero();     // inertial frame
  Eigen::Vector2d com_surface = Eigen::Vector2d::Zero();   // surface frame
  Eigen::Vector2d swing_reference = Eigen::Vector2d::Zero();
};

inline constexpr unsigned kFlagImpact = 1u;
inline constexpr unsigned kFlagPush = 2u;
inline constexpr unsigned kFlagBias = 4u;

struct ImpactEvent {
  int index = 0;  // 1-based landing count
  double time = 0.0;
  FootstepCommand command;
  PlanarState pre_sagittal{0.0, 0.0, Plane::kSagittal};
  PlanarState pre_frontal{0.0, 0.0, Plane::kFrontal};
  PlanarState post_sagittal{0.0, 0.0, Plane::kSagittal};
  PlanarState post_frontal{0.0, 0.0, Plane::kFrontal};
  /// Target this landing's pre-impact momentum was planned for (by the
  /// previous landing's command). Absent for the first landing.
  std::optional<MomentumTarget> planned_target;
  /// New stance foot in the surface frame.
  Eigen::Vector2d landing = Eigen::Vector2d::Zero();
  SupportSide new_support = SupportSide::kRight;
};

struct DisturbanceRecord {
  double t = 0.0;
  Disturbance disturbance;
};

enum class SimStatus { kOk, kDiverged };
std::string_view ToString(SimStatus status);

struct SimTrace {
  std::vector<TraceSample> samples;
  std::vector<ImpactEvent> events;
  std::vector<DisturbanceRecord> disturbance_log;
  SimStatus status = SimStatus::kOk;
  double diverged_at = 0.0;
  double step_duration = 0.4;

  /// Initial state followed by every post-impact state.
  std::vector<PlanarState> PostImpactStates(Plane plane) const;
};

/// |pos| > 10 m or |mom| > 1e3 kg m^2/s halts the run.
inline constexpr double kDivergencePosition = 10.0;
inline constexpr double kDivergenceMomentum = 1e3;

SimTrace Run(const Scenario& scenario);

/// Per-step target sequence for the scenario's periodic orbit on `plane`
/// (length n1). Throws std::invalid_argument for path-tracking targets, or
/// for step-width targets with an odd frontal n1.
std::vector<double> OrbitTargets(const Scenario& scenario, Plane plane);

/// Orbit of the closed loop under the true surface motion.
PeriodicOrbit ScenarioOrbit(const Scenario& scenario, Plane plane);

/// Convergence of a trace's post-impact states to `orbit`.
ConvergenceReport VerifyConvergence(const SimTrace& trace, const PeriodicOrbit& orbit,
                                    double tol);

struct Metrics {
  double avg_forward_velocity = 0.0;  // m/s, final velocity window
  double target_velocity = 0.0;       // L_y bar / (m H) (or path velocity)
  double velocity_error = 0.0;        // |avg - target|
  double window = 0.0;                // s
  std::vector<Eigen::Vector2d> landing_positions;
  double max_state_norm = 0.0;  // max over samples of |(x, L_y, y, L_x)|_2
  bool bounded = true;
  bool converged = false;
  int steps_to_converge = -1;
};

inline constexpr double kConvergenceTolerance = 1e-8;

/// Average forward velocity = net inertial CoM displacement over the final
/// `window` seconds divided by `window`. Convergence is checked against every
/// orbit given. Throws InsufficientDataError if the trace is shorter than
/// the window or the window is not positive.
Metrics ComputeMetrics(const SimTrace& trace, const AlipParams& params,
                       double target_velocity, double window,
                       std::span<const PeriodicOrbit> orbits);

/// Metrics with the window set to the sagittal T_sys and orbits built from
/// the scenario where they are defined.
Metrics ScenarioMetrics(const Scenario& scenario, const SimTrace& trace);

struct SweepCell {
  double delta_amplitude = 0.0;
  double delta_time = 0.0;
  SimStatus status = SimStatus::kOk;
  Metrics metrics;
  std::string error;  // non-empty if the cell failed
};

/// Runs one simulation per (delta_A, delta_t) pair, row-major in delta_A,
/// with the believed sagittal sinusoid perturbed to
/// (A + delta_A) cos(2 pi / T (t + delta_t) + phase). The base scenario must
/// have exactly one sagittal sinusoid in its believed motion. Cells run in
/// parallel; a failing cell is recorded, not thrown.
std::vector<SweepCell> UncertaintySweep(const Scenario& base,
                                        std::span<const double> delta_amplitude,
                                        std::span<const double> delta_time);

/// The believed motion of `base` with the perturbation above applied.
DrsMotion PerturbBelievedMotion(const Scenario& base, double delta_amplitude,
                                double delta_time);

}  // namespace alipdrs

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

// Deadbeat foot placement. During the current step the planner predicts the
// contact angular momentum at the coming landing T_k, then picks the landing
// position so that the momentum at the *following* landing T_{k+1} hits the
// desired value, accounting for the surface forcing over [T_k, T_{k+1}].

#pragma once

#include <Eigen/Core>

#include "alipdrs/model.h"

namespace alipdrs {

enum class SupportSide { kLeft, kRight };

constexpr SupportSide Opposite(SupportSide side) {
  return side == SupportSide::kLeft ? SupportSide::kRight : SupportSide::kLeft;
}
std::string_view ToString(SupportSide side);

enum class TargetSource { kConstantVelocity, kStepWidth, kPathTracking };
std::string_view ToString(TargetSource source);

/// Desired pre-impact momenta for an upcoming step end.
struct MomentumTarget {
  double sagittal = 0.0;  // L_y bar
  double frontal = 0.0;   // L_x bar
  TargetSource source = TargetSource::kConstantVelocity;
};

/// Policy for choosing a MomentumTarget every step.
///  - kConstantVelocity: both targets fixed at `sagittal` / `frontal`.
///  - kStepWidth: sagittal fixed, frontal alternates with the support foot to
///    give a periodic gait of width W.
///  - kPathTracking: base position feedback along a straight desired path
///    p_d(t) = path_origin + path_velocity * t (DRS frame). The step-width
///    alternation is superposed on the frontal target.
struct TargetSpec {
  TargetSource source = TargetSource::kStepWidth;
  double sagittal = 0.0;
  double frontal = 0.0;
  double gain_x = 0.0;
  double gain_y = 0.0;
  Eigen::Vector2d path_origin = Eigen::Vector2d::Zero();
  Eigen::Vector2d path_velocity = Eigen::Vector2d::Zero();

  bool operator==(const TargetSpec&) const = default;
};

struct FootstepCommand {
  double u_x = 0.0;  // m, forward step length
  double u_y = 0.0;  // m, lateral step length
  Eigen::Vector2d swing_target = Eigen::Vector2d::Zero();  // (x_SwC, y_SwC)
  double decided_at = 0.0;
  /// Targets this command was planned for (momentum at the step end after
  /// the coming landing).
  MomentumTarget target;
};

/// Momentum component of Flow(state, t, t_end). Throws if t > t_end.
double PredictPreimpactMomentum(const PlanarState& state, double t, double t_end,
                                const AlipParams& params, const DrsMotion& drs);

/// CoM position relative to the landing foot that makes the sagittal momentum
/// one step later equal `target`:
///   (target - V2_next - cosh(l T) L_pre) / (m H l sinh(l T)).
double PlanSagittalLanding(double preimpact_momentum, double target,
                           double next_forcing_v2, const AlipParams& params);

/// Frontal counterpart with the sign pattern of the frontal dynamics:
///   (-target + V2_next + cosh(l T) L_pre) / (m H l sinh(l T)).
double PlanFrontalLanding(double preimpact_momentum, double target,
                          double next_forcing_v2, const AlipParams& params);

double PlanLanding(Plane plane, double preimpact_momentum, double target,
                   double next_forcing_v2, const AlipParams& params);

/// Full footstep decision for both planes at time t_now during the step that
/// ends at t_impact. The next step is [t_impact, t_next_impact]. For
/// kStepWidth targets the frontal value is taken from the support foot,
/// otherwise `targets` is used verbatim.
///
/// Requires t_now <= t_impact < t_next_impact and matching plane tags;
/// throws std::invalid_argument otherwise.
FootstepCommand ControlCommands(const PlanarState& sagittal,
                                const PlanarState& frontal, double t_now,
                                double t_impact, double t_next_impact,
                                const AlipParams& params, const DrsMotion& drs,
                                const MomentumTarget& targets, SupportSide support);

/// +-(1/2) m H W l sinh(l T) / (1 + cosh(l T)); positive for right support.
///
/// The support side is the one carrying the robot while the step is planned,
/// so the value is the target for the end of the next step (whose support is
/// the other foot). With y pointing left this yields u_y = +W when the left
/// foot lands and -W when the right foot lands.
double DesiredFrontalMomentum(const AlipParams& params, SupportSide support);

/// L_x = K_y (y_b - y_bd) + m H ydot_bd,  L_y = K_x (x_b - x_bd) + m H xdot_bd.
MomentumTarget PathTrackingTargets(const Eigen::Vector2d& base_pos,
                                   const Eigen::Vector2d& base_des,
                                   const Eigen::Vector2d& base_des_vel,
                                   const Eigen::Vector2d& gains,
                                   const AlipParams& params);

/// Planner session: owns the target policy, support side and step index.
/// Single writer (the control loop); copies are cheap snapshots.
class FootstepPlanner {
 public:
  FootstepPlanner(AlipParams params, DrsMotion believed, TargetSpec targets,
                  SupportSide initial_support);

  /// Resolves the target policy for the step end after the coming landing.
  /// `base_pos` is only read by kPathTracking.
  MomentumTarget TargetAt(double t_now, const Eigen::Vector2d& base_pos) const;

  FootstepCommand Plan(const PlanarState& sagittal, const PlanarState& frontal,
                       double t_now, double t_impact, double t_next_impact,
                       const Eigen::Vector2d& base_pos) const;

  /// Call once per landing.
  void AdvanceStep();

  SupportSide support() const { return support_; }
  int step_index() const { return step_index_; }
  const AlipParams& params() const { return params_; }
  const DrsMotion& believed() const { return believed_; }
  const TargetSpec& targets() const { return targets_; }

 private:
  AlipParams params_;
  DrsMotion believed_;
  TargetSpec targets_;
  SupportSide support_;
  int step_index_ = 0;
};

}  // namespace alipdrs

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

#include "alipdrs/footstep.h"

#include <cmath>
#include <stdexcept>

namespace alipdrs {

std::string_view ToString(SupportSide side) {
  return side == SupportSide::kLeft ? "left" : "right";
}

std::string_view ToString(TargetSource source) {
  switch (source) {
    case TargetSource::kConstantVelocity:
      return "constant_velocity";
    case TargetSource::kStepWidth:
      return "step_width";
    case TargetSource::kPathTracking:
      return "path_tracking";
  }
  return "unknown";
}

double PredictPreimpactMomentum(const PlanarState& state, double t, double t_end,
                                const AlipParams& params, const DrsMotion& drs) {
  if (t > t_end) {
    throw std::invalid_argument("momentum prediction requires t <= t_end");
  }
  return Flow(state, t, t_end, params, drs).mom;
}

double PlanSagittalLanding(double preimpact_momentum, double target,
                           double next_forcing_v2, const AlipParams& params) {
  const double lt = params.frequency() * params.step_duration();
  return (target - next_forcing_v2 - std::cosh(lt) * preimpact_momentum) /
         (params.momentum_scale() * std::sinh(lt));
}

double PlanFrontalLanding(double preimpact_momentum, double target,
                          double next_forcing_v2, const AlipParams& params) {
  const double lt = params.frequency() * params.step_duration();
  return (-target + next_forcing_v2 + std::cosh(lt) * preimpact_momentum) /
         (params.momentum_scale() * std::sinh(lt));
}

double PlanLanding(Plane plane, double preimpact_momentum, double target,
                   double next_forcing_v2, const AlipParams& params) {
  return plane == Plane::kSagittal
             ? PlanSagittalLanding(preimpact_momentum, target, next_forcing_v2, params)
             : PlanFrontalLanding(preimpact_momentum, target, next_forcing_v2, params);
}

FootstepCommand ControlCommands(const PlanarState& sagittal,
                                const PlanarState& frontal, double t_now,
                                double t_impact, double t_next_impact,
                                const AlipParams& params, const DrsMotion& drs,
                                const MomentumTarget& targets, SupportSide support) {
  if (sagittal.plane != Plane::kSagittal || frontal.plane != Plane::kFrontal) {
    throw std::invalid_argument("control_commands: plane tags do not match");
  }
  if (!(t_now <= t_impact) || !(t_impact < t_next_impact)) {
    throw std::invalid_argument(
        "control_commands requires t_now <= t_impact < t_next_impact");
  }
  MomentumTarget resolved = targets;
  if (targets.source == TargetSource::kStepWidth) {
    resolved.frontal = DesiredFrontalMomentum(params, support);
  }

  const PlanarState sag_pre = Flow(sagittal, t_now, t_impact, params, drs);
  const PlanarState front_pre = Flow(frontal, t_now, t_impact, params, drs);
  const double v2_sag =
      ComputeForcingIntegral(params, drs, Plane::kSagittal, t_impact, t_next_impact).v2;
  const double v2_front =
      ComputeForcingIntegral(params, drs, Plane::kFrontal, t_impact, t_next_impact).v2;

  FootstepCommand cmd;
  cmd.swing_target[0] = PlanSagittalLanding(sag_pre.mom, resolved.sagittal, v2_sag, params);
  cmd.swing_target[1] = PlanFrontalLanding(front_pre.mom, resolved.frontal, v2_front, params);
  cmd.u_x = sag_pre.pos - cmd.swing_target[0];
  cmd.u_y = front_pre.pos - cmd.swing_target[1];
  cmd.decided_at = t_now;
  cmd.target = resolved;
  return cmd;
}

double DesiredFrontalMomentum(const AlipParams& params, SupportSide support) {
  const double l = params.frequency();
  const double lt = l * params.step_duration();
  const double magnitude = 0.5 * params.mass_height() * params.step_width() * l *
                           std::sinh(lt) / (1.0 + std::cosh(lt));
  return support == SupportSide::kRight ? magnitude : -magnitude;
}

MomentumTarget PathTrackingTargets(const Eigen::Vector2d& base_pos,
                                   const Eigen::Vector2d& base_des,
                                   const Eigen::Vector2d& base_des_vel,
                                   const Eigen::Vector2d& gains,
                                   const AlipParams& params) {
  if (!gains.allFinite()) throw std::invalid_argument("path-tracking gains must be finite");
  const double mh = params.mass_height();
  MomentumTarget target;
  target.sagittal = gains[0] * (base_pos[0] - base_des[0]) + mh * base_des_vel[0];
  target.frontal = gains[1] * (base_pos[1] - base_des[1]) + mh * base_des_vel[1];
  target.source = TargetSource::kPathTracking;
  return target;
}

FootstepPlanner::FootstepPlanner(AlipParams params, DrsMotion believed,
                                 TargetSpec targets, SupportSide initial_support)
    : params_(params),
      believed_(std::move(believed)),
      targets_(std::move(targets)),
      support_(initial_support) {}

MomentumTarget FootstepPlanner::TargetAt(double t_now,
                                         const Eigen::Vector2d& base_pos) const {
  switch (targets_.source) {
    case TargetSource::kConstantVelocity:
      return {targets_.sagittal, targets_.frontal, TargetSource::kConstantVelocity};
    case TargetSource::kStepWidth:
      return {targets_.sagittal, DesiredFrontalMomentum(params_, support_),
              TargetSource::kStepWidth};
    case TargetSource::kPathTracking: {
      const Eigen::Vector2d desired =
          targets_.path_origin + targets_.path_velocity * t_now;
      MomentumTarget t = PathTrackingTargets(
          base_pos, desired, targets_.path_velocity,
          Eigen::Vector2d(targets_.gain_x, targets_.gain_y), params_);
      t.frontal += DesiredFrontalMomentum(params_, support_);
      return t;
    }
  }
  throw std::logic_error("unhandled target source");
}

FootstepCommand FootstepPlanner::Plan(const PlanarState& sagittal,
                                      const PlanarState& frontal, double t_now,
                                      double t_impact, double t_next_impact,
                                      const Eigen::Vector2d& base_pos) const {
  MomentumTarget target = TargetAt(t_now, base_pos);
  // Already resolved against the support foot; pass it through verbatim.
  if (target.source == TargetSource::kStepWidth) {
    target.source = TargetSource::kConstantVelocity;
  }
  FootstepCommand cmd = ControlCommands(sagittal, frontal, t_now, t_impact,
                                        t_next_impact, params_, believed_, target,
                                        support_);
  cmd.target.source = targets_.source;
  return cmd;
}

void FootstepPlanner::AdvanceStep() {
  support_ = Opposite(support_);
  ++step_index_;
}

}  // namespace alipdrs

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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "alipdrs/footstep.h"

namespace alipdrs {

/// Bezier polynomial phi(s) = sum_j alpha_j C(M, j) s^j (1 - s)^(M - j).
struct BezierTraj {
  std::vector<double> coeffs;  // alpha_0 .. alpha_M
  std::string label;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  bool operator==(const BezierTraj&) const = default;
};

/// de Casteljau evaluation. Throws std::invalid_argument for s outside [0, 1]
/// or an empty coefficient list.
double BezierEval(const BezierTraj& traj, double s);

/// d phi / ds. Zero for order 0.
double BezierDerivative(const BezierTraj& traj, double s);

/// Swing-foot height profile used for phi_7.
BezierTraj DefaultSwingHeight();

struct PhaseClock {
  double step_start = 0.0;     // T_{k-1}
  double step_duration = 0.4;  // T_step
};

/// (t - step_start) / step_duration, saturated at 1 when the landing is late.
/// Throws std::invalid_argument if t < step_start.
double Phase(double t, const PhaseClock& clock);

/// Swing-foot x/y references (phi_5, phi_6) updated every control tick.
/// alpha_0 is latched to the measured swing-foot position at the start of a
/// step, alpha_M follows the planner's latest landing target and the interior
/// coefficients interpolate linearly between the two.
class SwingTrajectory {
 public:
  static constexpr int kDefaultOrder = 6;

  explicit SwingTrajectory(int order = kDefaultOrder);

  void BeginStep(const PhaseClock& clock);

  /// `swing_rel_com` is the swing-foot position relative to the CoM.
  void Update(double t, const Eigen::Vector2d& swing_rel_com,
              const FootstepCommand& command);

  const BezierTraj& x() const { return x_; }
  const BezierTraj& y() const { return y_; }
  const PhaseClock& clock() const { return clock_; }

  /// (phi_5, phi_6) at time t, phase saturated into [0, 1].
  Eigen::Vector2d Reference(double t) const;

 private:
  BezierTraj x_;
  BezierTraj y_;
  PhaseClock clock_;
  bool start_latched_ = false;
};

}  // namespace alipdrs

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

#include "alipdrs/trajgen.h"

#include <algorithm>
#include <stdexcept>

namespace alipdrs {
namespace {

double DeCasteljau(std::vector<double> pts, double s) {
  for (std::size_t n = pts.size(); n > 1; --n) {
    for (std::size_t i = 0; i + 1 < n; ++i) pts[i] = (1.0 - s) * pts[i] + s * pts[i + 1];
  }
  return pts.front();
}

void RequireUnitInterval(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("Bezier phase must lie in [0, 1]");
  }
}

void Interpolate(BezierTraj& traj) {
  const int m = traj.order();
  const double a0 = traj.coeffs.front();
  const double am = traj.coeffs.back();
  for (int j = 1; j < m; ++j) {
    traj.coeffs[static_cast<std::size_t>(j)] = a0 + (am - a0) * j / m;
  }
}

}  // namespace

double BezierEval(const BezierTraj& traj, double s) {
  if (traj.coeffs.empty()) throw std::invalid_argument("Bezier has no coefficients");
  RequireUnitInterval(s);
  return DeCasteljau(traj.coeffs, s);
}

double BezierDerivative(const BezierTraj& traj, double s) {
  if (traj.coeffs.empty()) throw std::invalid_argument("Bezier has no coefficients");
  RequireUnitInterval(s);
  const int m = traj.order();
  if (m == 0) return 0.0;
  std::vector<double> diffs(static_cast<std::size_t>(m));
  for (std::size_t j = 0; j < diffs.size(); ++j) {
    diffs[j] = traj.coeffs[j + 1] - traj.coeffs[j];
  }
  return m * DeCasteljau(std::move(diffs), s);
}

BezierTraj DefaultSwingHeight() {
  return {{0.0, 0.02, 0.07, 0.15, 0.07, 0.02, 0.0}, "z_sw"};
}

double Phase(double t, const PhaseClock& clock) {
  if (t < clock.step_start) {
    throw std::invalid_argument("phase requested before the step started");
  }
  return std::min(1.0, (t - clock.step_start) / clock.step_duration);
}

SwingTrajectory::SwingTrajectory(int order) {
  if (order < 1) throw std::invalid_argument("swing trajectory order must be >= 1");
  const auto n = static_cast<std::size_t>(order) + 1;
  x_ = {std::vector<double>(n, 0.0), "x_sw"};
  y_ = {std::vector<double>(n, 0.0), "y_sw"};
}

void SwingTrajectory::BeginStep(const PhaseClock& clock) {
  clock_ = clock;
  start_latched_ = false;
}

void SwingTrajectory::Update(double t, const Eigen::Vector2d& swing_rel_com,
                             const FootstepCommand& command) {
  const double s = (t - clock_.step_start) / clock_.step_duration;
  if (!(s >= 0.0 && s <= 1.0)) return;
  if (s == 0.0 || !start_latched_) {
    x_.coeffs.front() = swing_rel_com[0];
    y_.coeffs.front() = swing_rel_com[1];
    start_latched_ = true;
  }
  x_.coeffs.back() = -command.swing_target[0];
  y_.coeffs.back() = -command.swing_target[1];
  Interpolate(x_);
  Interpolate(y_);
}

Eigen::Vector2d SwingTrajectory::Reference(double t) const {
  const double s = Phase(t, clock_);
  return {BezierEval(x_, s), BezierEval(y_, s)};
}

}  // namespace alipdrs

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

// Angular-momentum linear inverted pendulum walking on a horizontally swaying
// rigid surface. Per plane the state is (CoM position relative to the stance
// point, angular momentum about the stance point):
//
//   sagittal:  d/dt [x_SC; L_y] = [0  1/(mH); mg 0]   [x_SC; L_y] + [-vx_S(t); 0]
//   frontal:   d/dt [y_SC; L_x] = [0 -1/(mH); -mg 0]  [y_SC; L_x] + [-vy_S(t); 0]
//
// A foot landing shifts the relative position by the step length and leaves
// the contact angular momentum untouched.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace alipdrs {

enum class Plane { kSagittal, kFrontal };
enum class Axis { kX, kY };

/// Surface axis that drives the given plane (sagittal <-> x, frontal <-> y).
constexpr Axis AxisOf(Plane plane) {
  return plane == Plane::kSagittal ? Axis::kX : Axis::kY;
}
constexpr Plane PlaneOf(Axis axis) {
  return axis == Axis::kX ? Plane::kSagittal : Plane::kFrontal;
}
std::string_view ToString(Plane plane);
std::string_view ToString(Axis axis);

/// Physical constants of the pendulum. The natural frequency l = sqrt(g/H) is
/// always derived, never stored.
class AlipParams {
 public:
  static constexpr double kStandardGravity = 9.81;

  /// Throws std::invalid_argument unless m, H, g, T_step > 0 and W >= 0.
  AlipParams(double mass, double com_height, double step_duration,
             double step_width, double gravity = kStandardGravity);

  /// m = 46.1 kg, H = 0.9 m, T_step = 0.4 s, W = 0.2 m, g = 9.81.
  static AlipParams Digit();

  double mass() const { return mass_; }
  double com_height() const { return com_height_; }
  double gravity() const { return gravity_; }
  double step_duration() const { return step_duration_; }
  double step_width() const { return step_width_; }

  double frequency() const;       // l
  double momentum_scale() const;  // m H l
  /// m H, the momentum-per-velocity factor.
  double mass_height() const { return mass_ * com_height_; }

  bool operator==(const AlipParams&) const = default;

 private:
  double mass_;
  double com_height_;
  double step_duration_;
  double step_width_;
  double gravity_;
};

/// One plane's state. Binary arithmetic between states of different planes
/// throws std::invalid_argument.
struct PlanarState {
  double pos = 0.0;  // m
  double mom = 0.0;  // kg m^2 / s
  Plane plane = Plane::kSagittal;

  static PlanarState FromVector(const Eigen::Vector2d& v, Plane plane) {
    return {v[0], v[1], plane};
  }
  Eigen::Vector2d vec() const { return {pos, mom}; }
  bool IsFinite() const;

  bool operator==(const PlanarState&) const = default;
};

PlanarState operator+(const PlanarState& a, const PlanarState& b);
PlanarState operator-(const PlanarState& a, const PlanarState& b);
PlanarState operator*(double k, const PlanarState& s);

/// x_S(t) contribution  amplitude * cos(2 pi t / period + phase).
struct SinusoidTerm {
  Axis axis = Axis::kX;
  double amplitude = 0.0;  // m
  double period = 1.0;     // s
  double phase = 0.0;      // rad

  bool operator==(const SinusoidTerm&) const = default;
};

/// One period of surface positions on a uniform grid, treated as periodic and
/// interpolated with a C1 cubic Hermite (Catmull-Rom) spline.
struct SampledProfile {
  Axis axis = Axis::kX;
  double spacing = 0.0;           // s
  std::vector<double> positions;  // m, at t = 0, h, 2h, ...

  double period() const { return spacing * static_cast<double>(positions.size()); }
  bool operator==(const SampledProfile&) const = default;
};

/// Horizontal periodic surface motion: a sum of sinusoids plus at most one
/// sampled profile per axis. An axis with neither is static ground.
class DrsMotion {
 public:
  DrsMotion() = default;
  explicit DrsMotion(std::vector<SinusoidTerm> terms,
                     std::vector<SampledProfile> profiles = {});

  const std::vector<SinusoidTerm>& terms() const { return terms_; }
  const std::vector<SampledProfile>& profiles() const { return profiles_; }
  const SampledProfile* profile(Axis axis) const;

  bool IsStatic(Axis axis) const;
  double Position(Axis axis, double t) const;
  double Velocity(Axis axis, double t) const;

  /// Least common period of everything acting on the axis, or nullopt for
  /// static ground. Terms whose periods are not commensurate (within 1e-9
  /// relative, up to a multiple of 1000) also yield nullopt.
  std::optional<double> Period(Axis axis) const;

  bool operator==(const DrsMotion&) const = default;

 private:
  std::vector<SinusoidTerm> terms_;
  std::vector<SampledProfile> profiles_;
};

/// V(t1, t2) = int_{t1}^{t2} exp(A (t2 - tau)) f(tau) dtau for one plane.
struct ForcingIntegral {
  double v1 = 0.0;  // m
  double v2 = 0.0;  // kg m^2 / s

  Eigen::Vector2d vec() const { return {v1, v2}; }
};

/// exp(A dt) in closed form. dt may be negative; non-finite dt throws.
Eigen::Matrix2d TransitionMatrix(const AlipParams& params, double dt, Plane plane);

/// Forcing integral over [t1, t2]. Sinusoids use the analytic antiderivative,
/// sampled profiles use composite Gauss-Legendre quadrature on the grid.
/// Throws std::invalid_argument if t1 > t2.
ForcingIntegral ComputeForcingIntegral(const AlipParams& params,
                                       const DrsMotion& drs, Plane plane,
                                       double t1, double t2);

/// exp(A (t2 - t1)) state + V(t1, t2), with the surface axis picked from the
/// state's plane.
PlanarState Flow(const PlanarState& state, double t1, double t2,
                 const AlipParams& params, const DrsMotion& drs);

/// Landing reset: pos -= step_length, mom unchanged.
PlanarState Reset(const PlanarState& state, double step_length);

/// Response over dt to a constant additive momentum rate `rate` starting from
/// zero state, int_0^dt exp(A u) [0; rate] du.
Eigen::Vector2d MomentumRateResponse(const AlipParams& params, Plane plane,
                                     double rate, double dt);

}  // namespace alipdrs

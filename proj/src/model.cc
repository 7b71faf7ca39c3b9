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

#include "alipdrs/model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace alipdrs {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// +1 for the sagittal plane, -1 for the frontal plane (negated off-diagonals).
double PlaneSign(Plane plane) { return plane == Plane::kSagittal ? 1.0 : -1.0; }

void RequireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void RequireSamePlane(const PlanarState& a, const PlanarState& b) {
  if (a.plane != b.plane) {
    throw std::invalid_argument("cannot combine sagittal and frontal states");
  }
}

// Periodic Catmull-Rom interpolation of a sampled profile. Returns position
// (derivative = false) or velocity (derivative = true).
double EvalProfile(const SampledProfile& p, double t, bool derivative) {
  const auto n = static_cast<long>(p.positions.size());
  const double period = p.period();
  double tau = std::fmod(t, period);
  if (tau < 0.0) tau += period;
  long i = static_cast<long>(std::floor(tau / p.spacing));
  if (i >= n) i = n - 1;
  const double u = tau / p.spacing - static_cast<double>(i);
  auto at = [&](long k) { return p.positions[static_cast<std::size_t>(((k % n) + n) % n)]; };
  const double p0 = at(i);
  const double p1 = at(i + 1);
  const double m0 = 0.5 * (at(i + 1) - at(i - 1));
  const double m1 = 0.5 * (at(i + 2) - at(i));
  if (!derivative) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
  }
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * m0 +
          (-6 * u2 + 6 * u) * p1 + (3 * u2 - 2 * u) * m1) /
         p.spacing;
}

// Closed-form forcing integral of one sinusoid term. With theta = w tau + phi
// and f = [A w sin(theta); 0]:
//   V1 = A w int cosh(l (t2 - tau)) sin(theta) dtau
//   V2 = sign * m H l * A w int sinh(l (t2 - tau)) sin(theta) dtau
Eigen::Vector2d SinusoidForcing(const AlipParams& params, const SinusoidTerm& term,
                                Plane plane, double t1, double t2) {
  const double l = params.frequency();
  const double w = kTwoPi / term.period;
  const double dt = t2 - t1;
  const double ch = std::cosh(l * dt);
  const double sh = std::sinh(l * dt);
  const double th1 = w * t1 + term.phase;
  const double th2 = w * t2 + term.phase;
  const double s1 = std::sin(th1), c1 = std::cos(th1);
  const double s2 = std::sin(th2), c2 = std::cos(th2);
  const double denom = l * l + w * w;
  const double int_cosh = (-w * c2 + l * sh * s1 + w * ch * c1) / denom;
  const double int_sinh = (-l * s2 + l * ch * s1 + w * sh * c1) / denom;
  const double aw = term.amplitude * w;
  return {aw * int_cosh, PlaneSign(plane) * params.momentum_scale() * aw * int_sinh};
}

Eigen::Vector2d ProfileForcing(const AlipParams& params, const SampledProfile& p,
                               Plane plane, double t1, double t2) {
  using Quad = boost::math::quadrature::gauss<double, 10>;
  const double l = params.frequency();
  const double k = PlaneSign(plane) * params.momentum_scale();
  auto f1 = [&](double tau) {
    return -std::cosh(l * (t2 - tau)) * EvalProfile(p, tau, true);
  };
  auto f2 = [&](double tau) {
    return -k * std::sinh(l * (t2 - tau)) * EvalProfile(p, tau, true);
  };
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  // Split at grid knots so each piece integrates a smooth polynomial-times-
  // exponential integrand.
  double a = t1;
  double knot = std::floor(t1 / p.spacing) * p.spacing;
  while (a < t2) {
    while (knot <= a) knot += p.spacing;
    const double b = std::min(knot, t2);
    acc[0] += Quad::integrate(f1, a, b);
    acc[1] += Quad::integrate(f2, a, b);
    a = b;
  }
  return acc;
}

}  // namespace

std::string_view ToString(Plane plane) {
  return plane == Plane::kSagittal ? "sagittal" : "frontal";
}

std::string_view ToString(Axis axis) { return axis == Axis::kX ? "x" : "y"; }

AlipParams::AlipParams(double mass, double com_height, double step_duration,
                       double step_width, double gravity)
    : mass_(mass),
      com_height_(com_height),
      step_duration_(step_duration),
      step_width_(step_width),
      gravity_(gravity) {
  if (!(mass > 0.0) || !(com_height > 0.0) || !(gravity > 0.0) ||
      !(step_duration > 0.0) || !(step_width >= 0.0) || !std::isfinite(mass) ||
      !std::isfinite(com_height) || !std::isfinite(gravity) ||
      !std::isfinite(step_duration) || !std::isfinite(step_width)) {
    throw std::invalid_argument(
        "AlipParams requires finite m, H, g, T_step > 0 and W >= 0");
  }
}

AlipParams AlipParams::Digit() { return AlipParams(46.1, 0.9, 0.4, 0.2); }

double AlipParams::frequency() const { return std::sqrt(gravity_ / com_height_); }

double AlipParams::momentum_scale() const {
  return mass_ * com_height_ * frequency();
}

bool PlanarState::IsFinite() const { return std::isfinite(pos) && std::isfinite(mom); }

PlanarState operator+(const PlanarState& a, const PlanarState& b) {
  RequireSamePlane(a, b);
  return {a.pos + b.pos, a.mom + b.mom, a.plane};
}

PlanarState operator-(const PlanarState& a, const PlanarState& b) {
  RequireSamePlane(a, b);
  return {a.pos - b.pos, a.mom - b.mom, a.plane};
}

PlanarState operator*(double k, const PlanarState& s) {
  return {k * s.pos, k * s.mom, s.plane};
}

DrsMotion::DrsMotion(std::vector<SinusoidTerm> terms,
                     std::vector<SampledProfile> profiles)
    : terms_(std::move(terms)), profiles_(std::move(profiles)) {
  for (const auto& t : terms_) {
    if (!(t.period > 0.0) || !std::isfinite(t.period) ||
        !std::isfinite(t.amplitude) || !std::isfinite(t.phase)) {
      throw std::invalid_argument(
          "sinusoid term needs a finite positive period and finite amplitude/phase");
    }
  }
  bool seen[2] = {false, false};
  for (const auto& p : profiles_) {
    auto& flag = seen[p.axis == Axis::kX ? 0 : 1];
    if (flag) throw std::invalid_argument("at most one sampled profile per axis");
    flag = true;
    if (!(p.spacing > 0.0) || !std::isfinite(p.spacing) || p.positions.size() < 3) {
      throw std::invalid_argument(
          "sampled profile needs positive spacing and at least 3 samples");
    }
    for (double v : p.positions) RequireFinite(v, "sampled position");
  }
}

const SampledProfile* DrsMotion::profile(Axis axis) const {
  for (const auto& p : profiles_) {
    if (p.axis == axis) return &p;
  }
  return nullptr;
}

bool DrsMotion::IsStatic(Axis axis) const {
  if (profile(axis) != nullptr) return false;
  return std::none_of(terms_.begin(), terms_.end(),
                      [axis](const SinusoidTerm& t) { return t.axis == axis; });
}

double DrsMotion::Position(Axis axis, double t) const {
  double x = 0.0;
  for (const auto& term : terms_) {
    if (term.axis != axis) continue;
    x += term.amplitude * std::cos(kTwoPi * t / term.period + term.phase);
  }
  if (const auto* p = profile(axis)) x += EvalProfile(*p, t, false);
  return x;
}

double DrsMotion::Velocity(Axis axis, double t) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    if (term.axis != axis) continue;
    const double w = kTwoPi / term.period;
    v -= term.amplitude * w * std::sin(w * t + term.phase);
  }
  if (const auto* p = profile(axis)) v += EvalProfile(*p, t, true);
  return v;
}

std::optional<double> DrsMotion::Period(Axis axis) const {
  std::vector<double> periods;
  for (const auto& term : terms_) {
    if (term.axis == axis) periods.push_back(term.period);
  }
  if (const auto* p = profile(axis)) periods.push_back(p->period());
  if (periods.empty()) return std::nullopt;
  const double longest = *std::max_element(periods.begin(), periods.end());
  for (int mult = 1; mult <= 1000; ++mult) {
    const double candidate = longest * mult;
    const bool all = std::all_of(periods.begin(), periods.end(), [&](double p) {
      const double ratio = candidate / p;
      return std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;
    });
    if (all) return candidate;
  }
  return std::nullopt;
}

Eigen::Matrix2d TransitionMatrix(const AlipParams& params, double dt, Plane plane) {
  RequireFinite(dt, "dt");
  const double l = params.frequency();
  const double k = params.momentum_scale();
  const double sg = PlaneSign(plane);
  const double ch = std::cosh(l * dt);
  const double sh = std::sinh(l * dt);
  Eigen::Matrix2d phi;
  phi << ch, sg * sh / k, sg * k * sh, ch;
  return phi;
}

ForcingIntegral ComputeForcingIntegral(const AlipParams& params,
                                       const DrsMotion& drs, Plane plane,
                                       double t1, double t2) {
  RequireFinite(t1, "t1");
  RequireFinite(t2, "t2");
  if (t1 > t2) throw std::invalid_argument("forcing integral requires t1 <= t2");
  if (t1 == t2) return {};
  const Axis axis = AxisOf(plane);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (const auto& term : drs.terms()) {
    if (term.axis == axis) v += SinusoidForcing(params, term, plane, t1, t2);
  }
  if (const auto* p = drs.profile(axis)) v += ProfileForcing(params, *p, plane, t1, t2);
  return {v[0], v[1]};
}

PlanarState Flow(const PlanarState& state, double t1, double t2,
                 const AlipParams& params, const DrsMotion& drs) {
  const ForcingIntegral forcing = ComputeForcingIntegral(params, drs, state.plane, t1, t2);
  if (t1 == t2) return state;
  const Eigen::Vector2d next =
      TransitionMatrix(params, t2 - t1, state.plane) * state.vec() + forcing.vec();
  return PlanarState::FromVector(next, state.plane);
}

PlanarState Reset(const PlanarState& state, double step_length) {
  return {state.pos - step_length, state.mom, state.plane};
}

Eigen::Vector2d MomentumRateResponse(const AlipParams& params, Plane plane,
                                     double rate, double dt) {
  RequireFinite(dt, "dt");
  const double l = params.frequency();
  const double ch = std::cosh(l * dt);
  const double sh = std::sinh(l * dt);
  return {PlaneSign(plane) * rate * (ch - 1.0) / (params.mass_height() * l * l),
          rate * sh / l};
}

}  // namespace alipdrs

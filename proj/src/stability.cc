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

#include "alipdrs/stability.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "alipdrs/errors.h"

namespace alipdrs {
namespace {

constexpr double kRatioTolerance = 1e-9;
constexpr double kCertifyMargin = 1e-9;

double PlaneSign(Plane plane) { return plane == Plane::kSagittal ? 1.0 : -1.0; }

double MaxAbs(const Eigen::Matrix2d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Eigen::Matrix2d ClosedLoopReset(const AlipParams& params, Plane plane) {
  const double lt = params.frequency() * params.step_duration();
  const double ks = params.momentum_scale() * std::sinh(lt);
  Eigen::Matrix2d r;
  r << 0.0, -PlaneSign(plane) * std::cosh(lt) / ks, 0.0, 1.0;
  return r;
}

Eigen::Matrix2d MonodromySingle(const AlipParams& params, Plane plane) {
  const double lt = params.frequency() * params.step_duration();
  const double ch = std::cosh(lt);
  const double ks = params.momentum_scale() * std::sinh(lt);
  const double sg = PlaneSign(plane);
  Eigen::Matrix2d m;
  m << -ch, -sg * ch * ch / ks, sg * ks, ch;
  return m;
}

Eigen::Matrix2d MonodromyGeneral(const AlipParams& params, Plane plane, int n1) {
  if (n1 < 1) throw std::invalid_argument("monodromy_general requires n1 >= 1");
  if (n1 == 1) return MonodromySingle(params, plane);
  return Eigen::Matrix2d::Zero();
}

CharacteristicPolynomial MonodromyCharacteristic(const AlipParams& params,
                                                 Plane plane) {
  const double lt = params.frequency() * params.step_duration();
  const double ch = std::cosh(lt);
  const double ks = params.momentum_scale() * std::sinh(lt);
  const double sg = PlaneSign(plane);
  // det = m00 m11 - m01 m10 with m01 m10 = -(sg ch^2 / ks)(sg ks) = -ch^2 (ks/ks).
  CharacteristicPolynomial poly;
  poly.trace = -ch + ch;
  poly.det = -ch * ch + (sg * sg) * ch * ch * (ks / ks);
  return poly;
}

std::array<std::complex<double>, 2> EigenvaluesFromCharacteristic(
    const CharacteristicPolynomial& poly) {
  const double half = 0.5 * poly.trace;
  const double disc = half * half - poly.det;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    // Avoid cancellation in the smaller root.
    const double big = half >= 0.0 ? half + r : half - r;
    const double small = big != 0.0 ? poly.det / big : 0.0;
    return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, im), std::complex<double>(half, -im)};
}

std::array<std::complex<double>, 2> Eigenvalues(const Eigen::Matrix2d& m) {
  const double det = std::fma(m(0, 0), m(1, 1), -m(0, 1) * m(1, 0));
  return EigenvaluesFromCharacteristic({m.trace(), det});
}

StabilityReport CertifyStability(const AlipParams& params, Plane plane, int n1) {
  StabilityReport report;
  report.plane = plane;
  report.n1 = n1;
  report.m_single = MonodromySingle(params, plane);
  report.m_general = MonodromyGeneral(params, plane, n1);
  report.characteristic = MonodromyCharacteristic(params, plane);
  const auto roots = EigenvaluesFromCharacteristic(report.characteristic);
  for (std::size_t i = 0; i < 2; ++i) report.eigenvalues[i] = std::pow(roots[i], n1);
  const auto numeric = Eigenvalues(report.m_single);
  report.numeric_spectral_radius = std::max(std::abs(numeric[0]), std::abs(numeric[1]));
  report.nilpotency_residual =
      MaxAbs(report.m_single * report.m_single) / MaxAbs(report.m_single);
  const bool inside = std::abs(report.eigenvalues[0]) < 1.0 - kCertifyMargin &&
                      std::abs(report.eigenvalues[1]) < 1.0 - kCertifyMargin;
  report.verdict = inside ? Verdict::kCertified : Verdict::kNotCertified;
  return report;
}

StepMap MakeStepMap(const AlipParams& params, const DrsMotion& drs, Plane plane,
                    double t_kplus, double t_k1minus, double target) {
  const double tstep = params.step_duration();
  if (!(t_kplus < t_k1minus)) {
    throw std::invalid_argument("step_map requires t_kplus < t_k1minus");
  }
  if (std::abs((t_k1minus - t_kplus) - tstep) > 1e-9 * tstep) {
    throw std::invalid_argument("step_map duration must equal T_step");
  }
  const Eigen::Matrix2d reset = ClosedLoopReset(params, plane);
  const Eigen::Vector2d v = ComputeForcingIntegral(params, drs, plane, t_kplus, t_k1minus).vec();
  const double v2_next =
      ComputeForcingIntegral(params, drs, plane, t_k1minus, t_k1minus + tstep).v2;
  const double lt = params.frequency() * tstep;
  const double ks = params.momentum_scale() * std::sinh(lt);
  const Eigen::Vector2d g(PlaneSign(plane) * (target - v2_next) / ks, 0.0);
  StepMap map;
  map.M = reset * TransitionMatrix(params, tstep, plane);
  map.v = reset * v + g;
  return map;
}

PeriodicOrbit::PeriodicOrbit(AlipParams params, DrsMotion drs, Plane plane, int n1,
                             int n2, double t0, std::vector<double> targets,
                             std::vector<Eigen::Vector2d> anchors,
                             std::vector<StepMap> maps)
    : params_(params),
      drs_(std::move(drs)),
      plane_(plane),
      n1_(n1),
      n2_(n2),
      t0_(t0),
      targets_(std::move(targets)),
      anchors_(std::move(anchors)),
      maps_(std::move(maps)) {}

PlanarState PeriodicOrbit::Anchor(long k) const {
  const long n = n1_;
  return PlanarState::FromVector(anchors_[static_cast<std::size_t>(((k % n) + n) % n)],
                                 plane_);
}

const StepMap& PeriodicOrbit::Map(long j) const {
  const long n = n1_;
  return maps_[static_cast<std::size_t>(((j % n) + n) % n)];
}

PlanarState PeriodicOrbit::Sample(double t) const {
  const double tsys = period();
  double tau = std::fmod(t - t0_, tsys);
  if (tau < 0.0) tau += tsys;
  const double tstep = params_.step_duration();
  long j = static_cast<long>(std::floor(tau / tstep));
  j = std::clamp(j, 0L, static_cast<long>(n1_) - 1);
  const double start = t0_ + static_cast<double>(j) * tstep;
  return Flow(Anchor(j), start, t0_ + tau, params_, drs_);
}

PeriodicOrbit ComputePeriodicOrbit(const AlipParams& params, const DrsMotion& drs,
                                   Plane plane, int n1, int n2,
                                   std::span<const double> targets, double t0) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("periodic_orbit requires n1, n2 >= 1");
  if (targets.size() != static_cast<std::size_t>(n1)) {
    throw std::invalid_argument("periodic_orbit needs one target per step (n1)");
  }
  const Axis axis = AxisOf(plane);
  const double tstep = params.step_duration();
  if (!drs.IsStatic(axis)) {
    const auto drs_period = drs.Period(axis);
    if (!drs_period) {
      throw std::invalid_argument("surface motion on this axis has no common period");
    }
    const double lhs = n1 * tstep;
    const double rhs = n2 * *drs_period;
    const double residual = std::abs(lhs - rhs) / rhs;
    if (residual > kRatioTolerance) {
      std::ostringstream msg;
      msg << "period ratio mismatch on axis " << ToString(axis) << ": N1*T_step = " << lhs
          << " but N2*T_drs = " << rhs << " (relative residual " << residual << ")";
      throw RatioMismatchError(msg.str(), residual);
    }
  }

  std::vector<StepMap> maps;
  maps.reserve(static_cast<std::size_t>(n1));
  for (int j = 0; j < n1; ++j) {
    const double start = t0 + j * tstep;
    const double next_target = targets[static_cast<std::size_t>((j + 1) % n1)];
    maps.push_back(MakeStepMap(params, drs, plane, start, start + tstep, next_target));
  }
  StepMap composed = maps[0];
  for (int j = 1; j < n1; ++j) composed = composed.Then(maps[static_cast<std::size_t>(j)]);

  Eigen::Vector2d fixed;
  if (n1 == 1) {
    // det(I - M) = 1 - tr M + det M = 1.
    fixed = (Eigen::Matrix2d::Identity() - composed.M).partialPivLu().solve(composed.v);
  } else {
    fixed = composed.v;  // composed multiplier is M^n1 = 0
  }

  std::vector<Eigen::Vector2d> anchors;
  anchors.reserve(static_cast<std::size_t>(n1));
  anchors.push_back(fixed);
  for (int j = 0; j + 1 < n1; ++j) {
    anchors.push_back(maps[static_cast<std::size_t>(j)].Apply(anchors.back()));
  }
  return PeriodicOrbit(params, drs, plane, n1, n2, t0,
                       std::vector<double>(targets.begin(), targets.end()),
                       std::move(anchors), std::move(maps));
}

ConvergenceReport VerifyConvergence(std::span<const PlanarState> post_impact,
                                    const PeriodicOrbit& orbit, double tol) {
  const std::size_t needed = 2 * static_cast<std::size_t>(orbit.n1()) + 1;
  if (post_impact.size() < needed) {
    throw InsufficientDataError("convergence check needs at least 2*N1 steps");
  }
  ConvergenceReport report;
  long first_good = -1;
  for (std::size_t k = 0; k < post_impact.size(); ++k) {
    if (post_impact[k].plane != orbit.plane()) {
      throw std::invalid_argument("convergence check: plane mismatch");
    }
    const Eigen::Vector2d err =
        post_impact[k].vec() - orbit.Anchor(static_cast<long>(k)).vec();
    const bool close = err.cwiseAbs().maxCoeff() < tol;
    if (!close) {
      first_good = -1;
    } else if (first_good < 0) {
      first_good = static_cast<long>(k);
    }
  }
  report.steps_to_converge = static_cast<int>(first_good);
  report.converged = first_good >= 0 && first_good <= 2L * orbit.n1();
  return report;
}

Eigen::Matrix2d DiscreteLyapunov(const Eigen::Matrix2d& m, const Eigen::Matrix2d& q) {
  if (!m.allFinite() || !q.allFinite()) {
    throw std::invalid_argument("discrete_lyapunov: non-finite input");
  }
  if (MaxAbs(q - q.transpose()) > 1e-12 * std::max(1.0, MaxAbs(q))) {
    throw std::invalid_argument("discrete_lyapunov: Q must be symmetric");
  }
  if (!(q(0, 0) > 0.0) || !(q.determinant() > 0.0)) {
    throw std::invalid_argument("discrete_lyapunov: Q must be positive definite");
  }
  const auto eig = Eigenvalues(m);
  const double radius = std::max(std::abs(eig[0]), std::abs(eig[1]));
  if (!(radius < 1.0)) {
    std::ostringstream msg;
    msg << "discrete_lyapunov: spectral radius " << radius << " >= 1";
    throw NotStabilizableError(msg.str());
  }
  const Eigen::Matrix2d mt = m.transpose();
  const double scale = std::max(1.0, MaxAbs(m) * MaxAbs(m));
  if (MaxAbs(m * m) <= 1e-12 * scale) {
    return q + mt * q * m;
  }
  // vec(M^T P M) = (M^T kron M^T) vec(P), column-major vec.
  Eigen::Matrix4d kron;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) kron.block<2, 2>(2 * i, 2 * j) = mt(i, j) * mt;
  }
  const Eigen::Matrix4d lhs = Eigen::Matrix4d::Identity() - kron;
  const Eigen::Vector4d vec_q(q(0, 0), q(1, 0), q(0, 1), q(1, 1));
  const Eigen::Vector4d vec_p = lhs.fullPivLu().solve(vec_q);
  Eigen::Matrix2d p;
  p << vec_p[0], vec_p[2], vec_p[1], vec_p[3];
  return 0.5 * (p + p.transpose());
}

}  // namespace alipdrs

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

// Stability machinery for the closed loop. Under the deadbeat landing law the
// post-impact states obey the affine step-to-step map
//
//   x(T_{k+1}^+) = M x(T_k^+) + (I + B) V(T_k^+, T_{k+1}^-) + g,
//
// where M = (I + B) exp(A T_step) has zero trace and zero determinant, hence
// M^2 = 0. Any initial error is annihilated after two landings.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "alipdrs/model.h"

namespace alipdrs {

/// Post-impact state at k+1 = M * (post-impact state at k) + v.
struct StepMap {
  Eigen::Matrix2d M = Eigen::Matrix2d::Identity();
  Eigen::Vector2d v = Eigen::Vector2d::Zero();

  Eigen::Vector2d Apply(const Eigen::Vector2d& x) const { return M * x + v; }
  PlanarState Apply(const PlanarState& s) const {
    return PlanarState::FromVector(Apply(s.vec()), s.plane);
  }
  /// `next` applied after this map.
  StepMap Then(const StepMap& next) const { return {next.M * M, next.M * v + next.v}; }
};

/// (I + B): the landing reset with the deadbeat law substituted.
Eigen::Matrix2d ClosedLoopReset(const AlipParams& params, Plane plane);

/// Closed form of (I + B) exp(A T_step). For the sagittal plane
///   [[-cosh, -cosh^2 / (m H l sinh)], [m H l sinh, cosh]]  at l T_step;
/// the frontal plane negates the off-diagonal entries.
Eigen::Matrix2d MonodromySingle(const AlipParams& params, Plane plane);

/// MonodromySingle^n1. For n1 >= 2 the exact result is the zero matrix and
/// that is what is returned. Throws std::invalid_argument for n1 < 1.
Eigen::Matrix2d MonodromyGeneral(const AlipParams& params, Plane plane, int n1);

struct CharacteristicPolynomial {
  double trace = 0.0;
  double det = 0.0;
};

/// Trace and determinant of MonodromySingle from their closed forms
/// (-cosh + cosh and -cosh^2 + cosh^2), not from the rounded matrix entries.
CharacteristicPolynomial MonodromyCharacteristic(const AlipParams& params, Plane plane);

/// Roots of lambda^2 - trace * lambda + det.
std::array<std::complex<double>, 2> EigenvaluesFromCharacteristic(
    const CharacteristicPolynomial& poly);

/// Eigenvalues of an arbitrary 2x2 from its rounded entries. For a defective
/// zero eigenvalue this is only accurate to ~sqrt(machine epsilon).
std::array<std::complex<double>, 2> Eigenvalues(const Eigen::Matrix2d& m);

enum class Verdict { kCertified, kNotCertified };

struct StabilityReport {
  Plane plane = Plane::kSagittal;
  int n1 = 1;
  Eigen::Matrix2d m_single = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d m_general = Eigen::Matrix2d::Zero();
  CharacteristicPolynomial characteristic;
  /// Eigenvalues of m_general, lambda_i^n1 of the closed-form characteristic roots.
  std::array<std::complex<double>, 2> eigenvalues{};
  /// Spectral radius of the rounded m_single (diagnostic only).
  double numeric_spectral_radius = 0.0;
  /// max |(m_single^2)_ij| / max |(m_single)_ij|.
  double nilpotency_residual = 0.0;
  Verdict verdict = Verdict::kNotCertified;
};

/// Certified iff both |eigenvalues| < 1 - 1e-9.
StabilityReport CertifyStability(const AlipParams& params, Plane plane, int n1);

/// Step-to-step map over [t_kplus, t_k1minus] with the landing at t_k1minus
/// planned for `target`, the momentum at the end of the step after it.
/// The duration must equal T_step (1e-9 relative).
StepMap MakeStepMap(const AlipParams& params, const DrsMotion& drs, Plane plane,
                    double t_kplus, double t_k1minus, double target);

/// Closed-loop periodic solution with period T_sys = n1 * T_step.
/// Step j spans [t0 + j T_step, t0 + (j + 1) T_step]; targets[j] is the
/// momentum required at the end of step j.
class PeriodicOrbit {
 public:
  PeriodicOrbit(AlipParams params, DrsMotion drs, Plane plane, int n1, int n2,
                double t0, std::vector<double> targets,
                std::vector<Eigen::Vector2d> anchors, std::vector<StepMap> maps);

  Plane plane() const { return plane_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double t0() const { return t0_; }
  double step_duration() const { return params_.step_duration(); }
  double period() const { return n1_ * params_.step_duration(); }

  /// Post-impact state at the start of step k (k taken modulo n1, k >= 0).
  PlanarState Anchor(long k) const;
  const std::vector<Eigen::Vector2d>& anchors() const { return anchors_; }
  /// Map from anchor j to anchor j + 1.
  const StepMap& Map(long j) const;
  const std::vector<double>& targets() const { return targets_; }

  /// State on the orbit at time t. Landing instants return the post-impact
  /// value.
  PlanarState Sample(double t) const;

 private:
  AlipParams params_;
  DrsMotion drs_;
  Plane plane_;
  int n1_;
  int n2_;
  double t0_;
  std::vector<double> targets_;
  std::vector<Eigen::Vector2d> anchors_;
  std::vector<StepMap> maps_;
};

/// Fixed point of the composed n1-step map. Throws RatioMismatchError if
/// n1 * T_step != n2 * T_drs within 1e-9 relative (static axes accept any
/// n2), and std::invalid_argument if targets.size() != n1.
PeriodicOrbit ComputePeriodicOrbit(const AlipParams& params, const DrsMotion& drs,
                                   Plane plane, int n1, int n2,
                                   std::span<const double> targets, double t0 = 0.0);

struct ConvergenceReport {
  bool converged = false;
  /// First post-impact index after which every state stays within tol of the
  /// orbit anchor; -1 if the final state is still off the orbit.
  int steps_to_converge = -1;
};

/// `post_impact[k]` is the state at t0 + k T_step (index 0 is the initial
/// state). Distance is the max-abs component difference. Converged means
/// steps_to_converge <= 2 n1. Throws InsufficientDataError if fewer than
/// 2 n1 + 1 states are given.
ConvergenceReport VerifyConvergence(std::span<const PlanarState> post_impact,
                                    const PeriodicOrbit& orbit, double tol);

/// Solves M^T P M - P = -Q. Uses P = Q + M^T Q M when M^2 vanishes and a
/// Kronecker-product solve otherwise. Throws NotStabilizableError if the
/// spectral radius of M is >= 1 and std::invalid_argument if Q is not
/// symmetric positive definite.
Eigen::Matrix2d DiscreteLyapunov(const Eigen::Matrix2d& m,
                                 const Eigen::Matrix2d& q = Eigen::Matrix2d::Identity());

/// V(x) = x^T P x.
inline double LyapunovValue(const Eigen::Matrix2d& p, const Eigen::Vector2d& x) {
  return x.dot(p * x);
}

}  // namespace alipdrs

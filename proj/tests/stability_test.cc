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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "alipdrs/errors.h"
#include "alipdrs/footstep.h"
#include "oracles.h"

namespace alipdrs {
namespace {

const AlipParams kDigit = AlipParams::Digit();

double MaxAbs(const Eigen::Matrix2d& m) { return m.cwiseAbs().maxCoeff(); }

// One closed-loop step simulated with the planner: flow from the post-impact
// state at t0, land at t0 + T, return the post-impact state.
PlanarState SimulatedStep(const DrsMotion& drs, const PlanarState& s, double t0,
                          double target) {
  const double t1 = t0 + 0.4;
  const PlanarState pre = Flow(s, t0, t1, kDigit, drs);
  const double landing_rel = PlanLanding(
      s.plane, pre.mom, target, ComputeForcingIntegral(kDigit, drs, s.plane, t1, t1 + 0.4).v2,
      kDigit);
  return Reset(pre, pre.pos - landing_rel);
}

TEST(MonodromyTest, ClosedFormMatchesResetTimesExponential) {
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const Eigen::Matrix2d a =
        oracle::PlantMatrix(46.1, 0.9, 9.81, plane == Plane::kSagittal);
    const Eigen::Matrix2d want = ClosedLoopReset(kDigit, plane) * oracle::Expm(a, 0.4);
    const Eigen::Matrix2d got = MonodromySingle(kDigit, plane);
    EXPECT_LT(MaxAbs(got - want), 1e-11 * MaxAbs(want)) << ToString(plane);
  }
}

TEST(MonodromyTest, TraceDeterminantAndNilpotency) {
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const auto poly = MonodromyCharacteristic(kDigit, plane);
    EXPECT_EQ(poly.trace, 0.0);
    EXPECT_EQ(poly.det, 0.0);
    const Eigen::Matrix2d m = MonodromySingle(kDigit, plane);
    EXPECT_LT(MaxAbs(m * m) / MaxAbs(m), 1e-12);
    const auto eig = EigenvaluesFromCharacteristic(poly);
    EXPECT_EQ(std::abs(eig[0]), 0.0);
    EXPECT_EQ(std::abs(eig[1]), 0.0);
  }
}

TEST(MonodromyTest, FrozenSagittalEntries) {
  const Eigen::Matrix2d m = MonodromySingle(kDigit, Plane::kSagittal);
  // cosh(l T) and m H l sinh(l T), 30-digit evaluation.
  EXPECT_NEAR(m(0, 0), -2.0063318860894945, 1e-13);
  EXPECT_NEAR(m(1, 1), 2.0063318860894945, 1e-13);
  EXPECT_NEAR(m(1, 0), 238.25705110033655, 1e-10);
}

TEST(MonodromyTest, GeneralPowers) {
  EXPECT_THROW(MonodromyGeneral(kDigit, Plane::kSagittal, 0), std::invalid_argument);
  EXPECT_EQ(MonodromyGeneral(kDigit, Plane::kSagittal, 1),
            MonodromySingle(kDigit, Plane::kSagittal));
  EXPECT_EQ(MonodromyGeneral(kDigit, Plane::kFrontal, 2), Eigen::Matrix2d::Zero());
  EXPECT_EQ(MonodromyGeneral(kDigit, Plane::kFrontal, 15), Eigen::Matrix2d::Zero());
}

TEST(MonodromyTest, CertifiesAcrossParameters) {
  for (double h : {0.5, 0.9, 1.2}) {
    for (double tstep : {0.2, 0.4, 0.7}) {
      const AlipParams p(30.0, h, tstep, 0.25);
      for (int n1 : {1, 2, 15}) {
        const StabilityReport r = CertifyStability(p, Plane::kSagittal, n1);
        EXPECT_EQ(r.verdict, Verdict::kCertified);
        EXPECT_LT(std::abs(r.eigenvalues[0]), 1e-12);
        EXPECT_LT(std::abs(r.eigenvalues[1]), 1e-12);
        EXPECT_LT(r.nilpotency_residual, 1e-12);
      }
    }
  }
}

TEST(EigenvaluesTest, GenericMatrix) {
  Eigen::Matrix2d m;
  m << 2.0, 1.0, 1.0, 2.0;
  auto e = Eigenvalues(m);
  std::vector<double> re = {e[0].real(), e[1].real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], 1.0, 1e-14);
  EXPECT_NEAR(re[1], 3.0, 1e-14);
  m << 0.0, -1.0, 1.0, 0.0;
  e = Eigenvalues(m);
  EXPECT_NEAR(std::abs(e[0].imag()), 1.0, 1e-14);
}

TEST(StepMapTest, StaticZeroTargetKillsMomentumInOneStep) {
  const StepMap map = MakeStepMap(kDigit, DrsMotion(), Plane::kSagittal, 0.0, 0.4, 0.0);
  EXPECT_EQ(map.v[1], 0.0);
  const Eigen::Vector2d x1 = map.Apply(Eigen::Vector2d(0.05, 3.0));
  const StepMap next = MakeStepMap(kDigit, DrsMotion(), Plane::kSagittal, 0.4, 0.8, 0.0);
  EXPECT_NEAR(next.Apply(x1)[1], 0.0, 1e-12);
}

TEST(StepMapTest, MatchesSimulatedStepCaseA) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const PlanarState s{0.02, 3.0, plane};
    const StepMap map = MakeStepMap(kDigit, drs, plane, 0.4, 0.8, 4.1);
    const PlanarState want = SimulatedStep(drs, s, 0.4, 4.1);
    const Eigen::Vector2d got = map.Apply(s.vec());
    EXPECT_NEAR(got[0], want.pos, 1e-10);
    EXPECT_NEAR(got[1], want.mom, 1e-10);
  }
}

TEST(StepMapTest, AffineDecomposition) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  const StepMap map = MakeStepMap(kDigit, drs, Plane::kSagittal, 0.0, 0.4, 4.1);
  const Eigen::Vector2d x(0.03, -1.0);
  const Eigen::Vector2d lin1 = map.Apply(x) - map.v;
  const Eigen::Vector2d lin2 = map.Apply(Eigen::Vector2d(2.0 * x)) - map.v;
  EXPECT_NEAR(lin2[0], 2.0 * lin1[0], 1e-12);
  EXPECT_NEAR(lin2[1], 2.0 * lin1[1], 1e-9);
}

TEST(StepMapTest, RejectsWrongDuration) {
  EXPECT_THROW(MakeStepMap(kDigit, DrsMotion(), Plane::kSagittal, 0.0, 0.5, 0.0),
               std::invalid_argument);
}

TEST(PeriodicOrbitTest, StaticConstantTarget) {
  const std::vector<double> targets = {4.1};
  const PeriodicOrbit orbit =
      ComputePeriodicOrbit(kDigit, DrsMotion(), Plane::kSagittal, 1, 1, targets);
  // The momentum before every landing is the target.
  EXPECT_NEAR(orbit.Sample(0.4 - 1e-12).mom, 4.1, 1e-9);
  EXPECT_NEAR(Flow(orbit.Anchor(0), 0.0, 0.4, kDigit, DrsMotion()).mom, 4.1, 1e-12);
}

TEST(PeriodicOrbitTest, CaseAIsPeriodic) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  const std::vector<double> targets = {4.1};
  const PeriodicOrbit orbit = ComputePeriodicOrbit(kDigit, drs, Plane::kSagittal, 1, 1, targets);
  const PlanarState a = orbit.Sample(0.0);
  const PlanarState b = orbit.Sample(orbit.period());
  EXPECT_NEAR(a.pos, b.pos, 1e-10);
  EXPECT_NEAR(a.mom, b.mom, 1e-10);
  for (double t : {0.05, 0.13, 0.33}) {
    EXPECT_NEAR(orbit.Sample(t).mom, orbit.Sample(t + orbit.period()).mom, 1e-10);
  }
  // Fixed point of the single-step map.
  const Eigen::Vector2d x = orbit.anchors()[0];
  const Eigen::Vector2d y = orbit.Map(0).Apply(x);
  EXPECT_NEAR(x[0], y[0], 1e-12);
  EXPECT_NEAR(x[1], y[1], 1e-10);
}

TEST(PeriodicOrbitTest, CaseBFixedPointAgainstForwardSimulation) {
  const DrsMotion drs({{Axis::kX, 0.14, 6.0, 0.0}});
  const std::vector<double> targets(15, 12.5);
  const PeriodicOrbit orbit =
      ComputePeriodicOrbit(kDigit, drs, Plane::kSagittal, 15, 1, targets);
  EXPECT_EQ(MonodromyGeneral(kDigit, Plane::kSagittal, 15), Eigen::Matrix2d::Zero());
  // 40 simulated steps from an arbitrary state; the tail sits on the orbit.
  PlanarState s{0.1, -3.0, Plane::kSagittal};
  for (int k = 0; k < 40; ++k) {
    s = SimulatedStep(drs, s, 0.4 * k, 12.5);
    if (k >= 1) {
      const PlanarState want = orbit.Anchor(k + 1);
      EXPECT_NEAR(s.pos, want.pos, 1e-10) << "step " << k;
      EXPECT_NEAR(s.mom, want.mom, 1e-9) << "step " << k;
    }
  }
}

TEST(PeriodicOrbitTest, RatioMismatchReportsResidual) {
  const DrsMotion drs({{Axis::kX, 0.14, 6.0, 0.0}});
  const std::vector<double> targets(14, 12.5);
  try {
    ComputePeriodicOrbit(kDigit, drs, Plane::kSagittal, 14, 1, targets);
    FAIL() << "expected a ratio mismatch";
  } catch (const RatioMismatchError& e) {
    EXPECT_NEAR(e.residual(), 0.4 / 6.0, 1e-12);
  }
  EXPECT_THROW(ComputePeriodicOrbit(kDigit, drs, Plane::kSagittal, 15, 1,
                                    std::vector<double>(3, 0.0)),
               std::invalid_argument);
}

TEST(ConvergenceTest, OnOrbitIsZeroSteps) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  const std::vector<double> targets = {4.1};
  const PeriodicOrbit orbit = ComputePeriodicOrbit(kDigit, drs, Plane::kSagittal, 1, 1, targets);
  std::vector<PlanarState> states(3, orbit.Anchor(0));
  const auto r = VerifyConvergence(std::span<const PlanarState>(states), orbit, 1e-8);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.steps_to_converge, 0);
  states.resize(2);
  EXPECT_THROW(VerifyConvergence(std::span<const PlanarState>(states), orbit, 1e-8),
               InsufficientDataError);
}

TEST(ConvergenceTest, OffOrbitConvergesInTwoSteps) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  const std::vector<double> targets = {4.1};
  const PeriodicOrbit orbit = ComputePeriodicOrbit(kDigit, drs, Plane::kSagittal, 1, 1, targets);
  std::vector<PlanarState> states = {{0.3, -5.0, Plane::kSagittal}};
  for (int k = 0; k < 5; ++k) states.push_back(SimulatedStep(drs, states.back(), 0.4 * k, 4.1));
  const auto r = VerifyConvergence(std::span<const PlanarState>(states), orbit, 1e-8);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.steps_to_converge, 2);
}

TEST(LyapunovTest, ZeroMapGivesQ) {
  EXPECT_EQ(DiscreteLyapunov(Eigen::Matrix2d::Zero()), Eigen::Matrix2d::Identity());
}

TEST(LyapunovTest, MonodromyResidual) {
  const Eigen::Matrix2d m = MonodromySingle(kDigit, Plane::kSagittal);
  const Eigen::Matrix2d p = DiscreteLyapunov(m);
  const Eigen::Matrix2d want = Eigen::Matrix2d::Identity() + m.transpose() * m;
  EXPECT_LT(MaxAbs(p - want), 1e-12 * MaxAbs(want));
  const Eigen::Matrix2d residual = m.transpose() * p * m - p + Eigen::Matrix2d::Identity();
  EXPECT_LT(residual.norm(), 1e-10);
}

TEST(LyapunovTest, GeneralStableMapUsesKroneckerSolve) {
  Eigen::Matrix2d m;
  m << 0.5, 0.2, -0.1, 0.3;
  Eigen::Matrix2d q;
  q << 2.0, 0.5, 0.5, 1.0;
  const Eigen::Matrix2d p = DiscreteLyapunov(m, q);
  EXPECT_LT((m.transpose() * p * m - p + q).norm(), 1e-12);
}

TEST(LyapunovTest, Errors) {
  Eigen::Matrix2d unstable;
  unstable << 1.2, 0.0, 0.0, 0.1;
  EXPECT_THROW(DiscreteLyapunov(unstable), NotStabilizableError);
  Eigen::Matrix2d bad_q;
  bad_q << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(DiscreteLyapunov(Eigen::Matrix2d::Zero(), bad_q), std::invalid_argument);
}

}  // namespace
}  // namespace alipdrs

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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace alipdrs {
namespace {

constexpr double kPi = std::numbers::pi;

const AlipParams kDigit = AlipParams::Digit();

Eigen::Matrix2d Plant(Plane plane) {
  return oracle::PlantMatrix(46.1, 0.9, 9.81, plane == Plane::kSagittal);
}

TEST(AlipParamsTest, DigitValues) {
  EXPECT_DOUBLE_EQ(kDigit.mass(), 46.1);
  EXPECT_DOUBLE_EQ(kDigit.com_height(), 0.9);
  EXPECT_DOUBLE_EQ(kDigit.step_duration(), 0.4);
  EXPECT_DOUBLE_EQ(kDigit.step_width(), 0.2);
  EXPECT_DOUBLE_EQ(kDigit.gravity(), 9.81);
  EXPECT_NEAR(kDigit.mass_height(), 41.49, 1e-12);
  EXPECT_NEAR(kDigit.frequency(), std::sqrt(9.81 / 0.9), 1e-15);
}

TEST(AlipParamsTest, RejectsNonPhysicalValues) {
  EXPECT_THROW(AlipParams(0.0, 0.9, 0.4, 0.2), std::invalid_argument);
  EXPECT_THROW(AlipParams(46.1, -0.9, 0.4, 0.2), std::invalid_argument);
  EXPECT_THROW(AlipParams(46.1, 0.9, 0.0, 0.2), std::invalid_argument);
  EXPECT_THROW(AlipParams(46.1, 0.9, 0.4, -0.1), std::invalid_argument);
  EXPECT_THROW(AlipParams(46.1, 0.9, 0.4, 0.2, std::nan("")), std::invalid_argument);
  EXPECT_NO_THROW(AlipParams(46.1, 0.9, 0.4, 0.0));
}

TEST(TransitionMatrixTest, ZeroDurationIsIdentity) {
  EXPECT_EQ(TransitionMatrix(kDigit, 0.0, Plane::kSagittal), Eigen::Matrix2d::Identity());
  EXPECT_EQ(TransitionMatrix(kDigit, 0.0, Plane::kFrontal), Eigen::Matrix2d::Identity());
}

TEST(TransitionMatrixTest, OneStepSagittalFrozen) {
  // l T = sqrt(9.81 / 0.9) * 0.4, m H l = 41.49 * sqrt(10.9).
  const double lt = 1.3206059215375342;
  const double mhl = 136.97984921148074;
  const Eigen::Matrix2d phi = TransitionMatrix(kDigit, 0.4, Plane::kSagittal);
  EXPECT_NEAR(phi(0, 0), std::cosh(lt), 1e-13);
  EXPECT_NEAR(phi(1, 1), std::cosh(lt), 1e-13);
  EXPECT_NEAR(phi(0, 1), std::sinh(lt) / mhl, 1e-15);
  EXPECT_NEAR(phi(1, 0), mhl * std::sinh(lt), 1e-10);
}

TEST(TransitionMatrixTest, MatchesGenericExponential) {
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    for (double dt : {-0.3, 1e-6, 0.013, 0.4, 1.7}) {
      const Eigen::Matrix2d want = oracle::Expm(Plant(plane), dt);
      const Eigen::Matrix2d got = TransitionMatrix(kDigit, dt, plane);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          EXPECT_NEAR(got(i, j), want(i, j), 1e-11 * std::max(1.0, std::abs(want(i, j))))
              << ToString(plane) << " dt=" << dt;
        }
      }
    }
  }
}

TEST(TransitionMatrixTest, RejectsNonFiniteDuration) {
  EXPECT_THROW(TransitionMatrix(kDigit, std::numeric_limits<double>::infinity(),
                                Plane::kSagittal),
               std::invalid_argument);
  EXPECT_THROW(TransitionMatrix(kDigit, std::nan(""), Plane::kFrontal), std::invalid_argument);
}

TEST(DrsMotionTest, SinusoidPositionAndVelocity) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.3}});
  const double t = 0.123;
  EXPECT_NEAR(drs.Position(Axis::kX, t), 0.04 * std::cos(2 * kPi * t / 0.4 + 0.3), 1e-16);
  EXPECT_NEAR(drs.Velocity(Axis::kX, t), oracle::SurfaceVelocity({{0.04, 0.4, 0.3}}, t),
              1e-15);
  EXPECT_EQ(drs.Position(Axis::kY, t), 0.0);
  EXPECT_TRUE(drs.IsStatic(Axis::kY));
  EXPECT_FALSE(drs.IsStatic(Axis::kX));
}

TEST(DrsMotionTest, LeastPeriod) {
  EXPECT_FALSE(DrsMotion().Period(Axis::kX).has_value());
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}, {Axis::kX, 0.01, 0.6, 0.0},
                       {Axis::kY, 0.1, 6.0, 0.0}});
  ASSERT_TRUE(drs.Period(Axis::kX).has_value());
  EXPECT_NEAR(*drs.Period(Axis::kX), 1.2, 1e-12);
  EXPECT_NEAR(*drs.Period(Axis::kY), 6.0, 1e-12);
  const DrsMotion incommensurate({{Axis::kX, 0.04, 1.0, 0.0}, {Axis::kX, 0.04, std::sqrt(2.0), 0.0}});
  EXPECT_FALSE(incommensurate.Period(Axis::kX).has_value());
}

TEST(DrsMotionTest, RejectsBadInput) {
  EXPECT_THROW(DrsMotion({{Axis::kX, 0.04, 0.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(DrsMotion({{Axis::kX, std::nan(""), 0.4, 0.0}}), std::invalid_argument);
  EXPECT_THROW(DrsMotion({}, {{Axis::kX, 0.1, {0.0, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(DrsMotion({}, {{Axis::kX, 0.1, {0.0, 1.0, 2.0}}, {Axis::kX, 0.1, {0.0, 1.0, 2.0}}}),
               std::invalid_argument);
}

TEST(DrsMotionTest, SampledProfileInterpolatesAndIsPeriodic) {
  const SampledProfile p{Axis::kY, 0.1, {0.0, 0.02, 0.05, 0.03, -0.01}};
  const DrsMotion drs({}, {p});
  for (std::size_t i = 0; i < p.positions.size(); ++i) {
    EXPECT_NEAR(drs.Position(Axis::kY, 0.1 * i), p.positions[i], 1e-15);
    EXPECT_NEAR(drs.Position(Axis::kY, 0.1 * i + 0.5), p.positions[i], 1e-15);
  }
  // Velocity against a central difference of position.
  for (double t : {0.03, 0.17, 0.31, 0.44}) {
    const double h = 1e-6;
    const double fd = (drs.Position(Axis::kY, t + h) - drs.Position(Axis::kY, t - h)) / (2 * h);
    EXPECT_NEAR(drs.Velocity(Axis::kY, t), fd, 1e-7);
  }
  ASSERT_TRUE(drs.Period(Axis::kY).has_value());
  EXPECT_NEAR(*drs.Period(Axis::kY), 0.5, 1e-15);
}

TEST(ForcingIntegralTest, StaticGroundIsExactlyZero) {
  const DrsMotion drs;
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const auto v = ComputeForcingIntegral(kDigit, drs, plane, 0.3, 1.9);
    EXPECT_EQ(v.v1, 0.0);
    EXPECT_EQ(v.v2, 0.0);
  }
}

TEST(ForcingIntegralTest, ReversedIntervalThrows) {
  EXPECT_THROW(ComputeForcingIntegral(kDigit, DrsMotion(), Plane::kSagittal, 1.0, 0.5),
               std::invalid_argument);
}

TEST(ForcingIntegralTest, CaseAOneStepMatchesQuadrature) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  const auto v = ComputeForcingIntegral(kDigit, drs, Plane::kSagittal, 0.0, 0.4);
  const Eigen::Vector2d want = oracle::ForcingQuadrature(
      Plant(Plane::kSagittal),
      [](double t) { return oracle::SurfaceVelocity({{0.04, 0.4, 0.0}}, t); }, 0.0, 0.4);
  EXPECT_NEAR(v.v1, want[0], 1e-9 * std::abs(want[0]));
  EXPECT_NEAR(v.v2, want[1], 1e-9 * std::abs(want[1]));
  // Frozen value of the same integral (30-digit quadrature).
  EXPECT_NEAR(v.v1, 0.038550277015700518, 1e-12);
  EXPECT_NEAR(v.v2, 9.1270836667547104, 1e-9);
}

TEST(ForcingIntegralTest, RandomSinusoidsMatchQuadrature) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(-0.2, 0.2), per(0.3, 8.0), ph(-kPi, kPi),
      t0(0.0, 10.0), len(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SinusoidTerm> terms;
    std::vector<oracle::Sinusoid> x_terms, y_terms;
    for (int k = 0; k < 3; ++k) {
      const Axis axis = k % 2 ? Axis::kY : Axis::kX;
      const oracle::Sinusoid s{amp(rng), per(rng), ph(rng)};
      terms.push_back({axis, s.amplitude, s.period, s.phase});
      (axis == Axis::kX ? x_terms : y_terms).push_back(s);
    }
    const DrsMotion drs(terms);
    const double t1 = t0(rng);
    const double t2 = t1 + len(rng);
    for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
      const auto& src = plane == Plane::kSagittal ? x_terms : y_terms;
      const Eigen::Vector2d want = oracle::ForcingQuadrature(
          Plant(plane), [&](double t) { return oracle::SurfaceVelocity(src, t); }, t1, t2);
      const auto got = ComputeForcingIntegral(kDigit, drs, plane, t1, t2);
      EXPECT_NEAR(got.v1, want[0], 1e-9 * std::abs(want[0]) + 1e-15);
      EXPECT_NEAR(got.v2, want[1], 1e-9 * std::abs(want[1]) + 1e-13);
    }
  }
}

TEST(ForcingIntegralTest, SampledProfileMatchesQuadrature) {
  const SampledProfile p{Axis::kX, 0.05, {0.0, 0.01, 0.03, 0.02, 0.0, -0.02, -0.025, -0.01}};
  const DrsMotion drs({}, {p});
  for (auto [t1, t2] : {std::pair{0.0, 0.4}, std::pair{0.013, 0.377}, std::pair{1.21, 1.61}}) {
    const Eigen::Vector2d want = oracle::ForcingQuadrature(
        Plant(Plane::kSagittal), [&](double t) { return drs.Velocity(Axis::kX, t); }, t1, t2,
        p.spacing);
    const auto got = ComputeForcingIntegral(kDigit, drs, Plane::kSagittal, t1, t2);
    EXPECT_NEAR(got.v1, want[0], 1e-10 * std::abs(want[0]) + 1e-14);
    EXPECT_NEAR(got.v2, want[1], 1e-10 * std::abs(want[1]) + 1e-12);
  }
}

TEST(FlowTest, ZeroStateStaticGroundStaysZero) {
  const PlanarState s{0.0, 0.0, Plane::kFrontal};
  EXPECT_EQ(Flow(s, 0.0, 3.0, kDigit, DrsMotion()), s);
}

TEST(FlowTest, SemigroupProperty) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}, {Axis::kY, 0.1, 6.0, 0.2}});
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const PlanarState s{0.03, 2.0, plane};
    const PlanarState a = Flow(Flow(s, 0.1, 0.27, kDigit, drs), 0.27, 0.5, kDigit, drs);
    const PlanarState b = Flow(s, 0.1, 0.5, kDigit, drs);
    EXPECT_NEAR(a.pos, b.pos, 1e-10);
    EXPECT_NEAR(a.mom, b.mom, 1e-10);
  }
}

TEST(FlowTest, CaseAMatchesRk4) {
  const DrsMotion drs({{Axis::kX, 0.04, 0.4, 0.0}});
  const PlanarState out = Flow({0.05, 0.0, Plane::kSagittal}, 0.0, 0.4, kDigit, drs);
  const Eigen::Vector2d want = oracle::Rk4(
      Plant(Plane::kSagittal),
      [](double t) { return oracle::SurfaceVelocity({{0.04, 0.4, 0.0}}, t); },
      Eigen::Vector2d(0.05, 0.0), 0.0, 0.4, 1e-5);
  EXPECT_NEAR(out.pos, want[0], 1e-6);
  EXPECT_NEAR(out.mom, want[1], 1e-6);
}

TEST(ResetTest, ShiftsPositionKeepsMomentum) {
  const PlanarState s = Reset({0.1, 4.1, Plane::kSagittal}, 0.2);
  EXPECT_DOUBLE_EQ(s.pos, -0.1);
  EXPECT_EQ(s.mom, 4.1);
  const PlanarState same{0.3, -1.0, Plane::kFrontal};
  EXPECT_EQ(Reset(same, 0.0), same);
}

TEST(PlanarStateTest, ArithmeticChecksPlane) {
  const PlanarState a{1.0, 2.0, Plane::kSagittal};
  const PlanarState b{0.5, 1.0, Plane::kFrontal};
  EXPECT_THROW(a + b, std::invalid_argument);
  EXPECT_THROW(a - b, std::invalid_argument);
  EXPECT_EQ((2.0 * a).mom, 4.0);
}

TEST(MomentumRateResponseTest, MatchesRk4) {
  for (Plane plane : {Plane::kSagittal, Plane::kFrontal}) {
    const Eigen::Matrix2d a = Plant(plane);
    // A constant momentum rate r enters like a surface velocity of -r in the
    // momentum row; integrate directly.
    const double r = 3.5;
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    const double h = 1e-5;
    for (double t = 0.0; t < 0.3 - 1e-12; t += h) {
      auto rhs = [&](const Eigen::Vector2d& s) {
        return Eigen::Vector2d(a * s + Eigen::Vector2d(0.0, r));
      };
      const Eigen::Vector2d k1 = rhs(x), k2 = rhs(x + h / 2 * k1), k3 = rhs(x + h / 2 * k2),
                            k4 = rhs(x + h * k3);
      x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    const Eigen::Vector2d got = MomentumRateResponse(kDigit, plane, r, 0.3);
    EXPECT_NEAR(got[0], x[0], 1e-9);
    EXPECT_NEAR(got[1], x[1], 1e-8);
  }
}

}  // namespace
}  // namespace alipdrs

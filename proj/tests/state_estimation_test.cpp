// Copyright 2026 The tdcm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tdcm/state_estimation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "test_util.hpp"

namespace tdcm {
namespace {

using testing::axis_angle_rotation;
using testing::default_chain;
using testing::random_configuration;

constexpr double kPiD = kPi<double>;

// Quaternion of a bent segment built from the axis-angle form, not from
// segment_rotation().
Eigen::Quaterniond bent(double phi, double theta) {
  return Eigen::Quaterniond(axis_angle_rotation(phi, theta));
}

TEST(WrapShortest, Examples) {
  EXPECT_EQ(wrap_shortest(0.0), 0.0);
  EXPECT_NEAR(rad2deg(wrap_shortest(deg2rad(170.0) - deg2rad(-170.0))), -20.0, 1e-12);
  const double w = wrap_shortest(-kPiD - 1e-9);
  EXPECT_GT(w, 0.0);
  EXPECT_LT(std::abs(w), kPiD);
  EXPECT_EQ(wrap_shortest(kPiD), kPiD);
  EXPECT_EQ(wrap_shortest(-kPiD), kPiD);
}

TEST(WrapShortest, DiffersByWholeTurns) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = u(rng);
    const double w = wrap_shortest(a);
    ASSERT_LE(std::abs(w), kPiD);
    const double turns = (a - w) / (2 * kPiD);
    ASSERT_NEAR(turns, std::round(turns), 1e-9);
  }
}

TEST(ArcParameters, IdentityIsStraight) {
  const auto c = arc_parameters_from_quaternion(Eigen::Quaterniond::Identity());
  EXPECT_EQ(c.phi, 0.0);
  EXPECT_EQ(c.theta, 0.0);
}

TEST(ArcParameters, RecoversTabulatedExamples) {
  for (const auto& [phi_deg, theta_deg] : {std::pair{30.0, 50.0}, std::pair{-170.0, 20.0}}) {
    const auto c = arc_parameters_from_quaternion(bent(deg2rad(phi_deg), deg2rad(theta_deg)));
    EXPECT_NEAR(c.phi, deg2rad(phi_deg), 1e-9);
    EXPECT_NEAR(c.theta, deg2rad(theta_deg), 1e-9);
  }
}

TEST(ArcParameters, RoundTripGrid) {
  for (int a = 0; a < 360; a += 3) {
    for (double theta = 1e-3; theta < kPiD - 1e-3; theta += 0.02) {
      const double phi = wrap_angle(deg2rad(-179.5 + a));
      const Eigen::Quaterniond q(segment_rotation(SegmentConfigd{phi, theta}));
      const auto c = arc_parameters_from_quaternion(q);
      ASSERT_NEAR(wrap_shortest(c.phi - phi), 0.0, 1e-9) << phi << " " << theta;
      ASSERT_NEAR(c.theta, theta, 1e-9);
    }
  }
}

TEST(ArcParameters, SignOfQuaternionDoesNotMatter) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const auto q = random_configuration(rng, 1, 1e-3, kPiD - 1e-3);
    const Eigen::Quaterniond p = bent(q.phi(0), q.theta(0));
    const Eigen::Quaterniond m(-p.coeffs());
    EXPECT_EQ(arc_parameters_from_quaternion(p), arc_parameters_from_quaternion(m));
  }
}

TEST(ArcParameters, ThetaStaysInRange) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    const auto c = arc_parameters_from_quaternion(q);
    ASSERT_GE(c.theta, 0.0);
    ASSERT_LE(c.theta, kPiD);
    ASSERT_GT(c.phi, -kPiD);
    ASSERT_LE(c.phi, kPiD);
  }
}

TEST(ArcParameters, NegativeCurvatureComesBackCanonical) {
  const auto c = arc_parameters_from_quaternion(bent(deg2rad(-90.0), deg2rad(-5.0)));
  EXPECT_NEAR(rad2deg(c.phi), 90.0, 1e-9);
  EXPECT_NEAR(rad2deg(c.theta), 5.0, 1e-9);
}

TEST(RelativeOrientation, Examples) {
  const Eigen::Quaterniond q = bent(0.3, 0.8);
  EXPECT_TRUE(relative_orientation(q, q).isApprox(Eigen::Quaterniond::Identity(), 1e-15));
  EXPECT_TRUE(relative_orientation(q, Eigen::Quaterniond::Identity()).isApprox(q, 1e-15));
  const Eigen::Quaterniond r = relative_orientation(Eigen::Quaterniond(-q.coeffs()),
                                                    Eigen::Quaterniond::Identity());
  EXPECT_GE(r.w(), 0.0);
}

TEST(RelativeOrientation, RecoversLinkRotation) {
  const auto geom = default_chain();
  std::mt19937_64 rng(6);
  for (int k = 0; k < 200; ++k) {
    const auto q = random_configuration(rng, 3, 0.0, kPiD / 2);
    const auto pose = forward_kinematics(q, std::span<const SegmentGeometry>(geom));
    const Eigen::Quaterniond s1(pose.frames[0].linear()), s2(pose.frames[1].linear());
    // Link rotation from the axis-angle oracle, compared as rotations.
    const Eigen::Matrix3d expected = axis_angle_rotation(q.phi(1), q.theta(1));
    EXPECT_LT((relative_orientation(s2, s1).toRotationMatrix() - expected).norm(), 1e-12);
  }
}

TEST(RelativeOrientation, RejectsDegenerateInput) {
  const Eigen::Quaterniond tiny(1e-4, 0, 0, 0);
  EXPECT_THROW(relative_orientation(tiny, Eigen::Quaterniond::Identity()), DegenerateQuaternion);
}

TEST(EstimateConfiguration, AllFramesAtBaseGiveZero) {
  SensorFrameSetd frames;
  frames.base_orientation = bent(1.0, 0.4);
  frames.tip_orientations.assign(3, frames.base_orientation);
  const auto q = estimate_configuration(frames);
  EXPECT_EQ(q.stacked(), Eigen::VectorXd::Zero(6));
}

TEST(EstimateConfiguration, InvertsForwardKinematics) {
  const auto geom = default_chain();
  std::mt19937_64 rng(8);
  for (int k = 0; k < 1000; ++k) {
    const auto q = random_configuration(rng, 3, 1e-3, kPiD - 1e-3);
    const auto frames = frames_from_pose(forward_kinematics(q, std::span<const SegmentGeometry>(geom)));
    const auto est = estimate_configuration(frames);
    for (Eigen::Index i = 0; i < 3; ++i) {
      ASSERT_NEAR(wrap_shortest(est.phi(i) - q.phi(i)), 0.0, 1e-9);
      ASSERT_NEAR(est.theta(i), q.theta(i), 1e-9);
    }
  }
}

TEST(EstimateConfiguration, ReportsSegmentOfDegenerateFrame) {
  SensorFrameSetd frames;
  frames.tip_orientations = {bent(0.1, 0.2), Eigen::Quaterniond(0, 0, 0, 0), bent(0.3, 0.4)};
  try {
    estimate_configuration(frames);
    FAIL() << "expected DegenerateQuaternion";
  } catch (const DegenerateQuaternion& e) {
    EXPECT_EQ(e.segment(), 1);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  frames.tip_orientations[1] = Eigen::Quaterniond(nan, 0, 0, 0);
  EXPECT_THROW(estimate_configuration(frames), DegenerateQuaternion);
}

// Additive component noise of sigma tilts the recovered rotation by about
// 2 sigma per axis; the bend vector has two such axes.
TEST(EstimateConfiguration, NoisePropagation) {
  constexpr double sigma = 1e-3;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, sigma);
  std::uniform_real_distribution<double> plane(-kPiD, kPiD);
  for (double theta_deg : {10.0, 30.0, 50.0, 80.0}) {
    const double theta = deg2rad(theta_deg);
    std::vector<double> bend_err, theta_err;
    for (int k = 0; k < 4000; ++k) {
      const double phi = plane(rng);
      Eigen::Quaterniond q = bent(phi, theta);
      for (int c = 0; c < 4; ++c) q.coeffs()(c) += noise(rng);
      SensorFrameSetd frames;
      frames.tip_orientations = {q};
      const auto est = estimate_configuration(frames);
      const Eigen::Vector2d truth(std::cos(phi) * theta, std::sin(phi) * theta);
      const Eigen::Vector2d got(std::cos(est.phi(0)) * est.theta(0),
                                std::sin(est.phi(0)) * est.theta(0));
      bend_err.push_back(rad2deg((got - truth).norm()));
      theta_err.push_back(rad2deg(std::abs(est.theta(0) - theta)));
    }
    const auto p99 = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v[v.size() * 99 / 100];
    };
    EXPECT_LT(p99(bend_err), 0.5) << theta_deg;
    EXPECT_LT(p99(theta_err), 0.5) << theta_deg;
    if (theta_deg == 10.0) {
      double ms = 0.0;
      for (double e : bend_err) ms += e * e;
      const double predicted = rad2deg(2.0 * std::sqrt(2.0) * sigma);
      EXPECT_NEAR(std::sqrt(ms / static_cast<double>(bend_err.size())), predicted, 0.1 * predicted);
    }
  }
}

}  // namespace
}  // namespace tdcm

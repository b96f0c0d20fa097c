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

#include "tdcm/task_space_ik.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace tdcm {
namespace {

using testing::default_chain;
using testing::random_configuration;

constexpr double kPiD = kPi<double>;

class IkTest : public ::testing::Test {
 protected:
  std::vector<SegmentGeometry> chain = default_chain();
  std::span<const SegmentGeometry> geom{chain};
};

Configurationd perturbed(const Configurationd& q, std::mt19937_64& rng, double deg) {
  std::uniform_real_distribution<double> u(-deg2rad(deg), deg2rad(deg));
  Configurationd out = q;
  for (Eigen::Index k = 0; k < out.stacked().size(); ++k) out.stacked()(k) += u(rng);
  return out.canonical();
}

TEST_F(IkTest, StraightArmPlaneColumnsVanish) {
  const Eigen::MatrixXd jac = position_jacobian(Configurationd(3), geom);
  EXPECT_LT(jac.col(0).norm(), 1e-9);
  // A straight segment tips sideways first: no axial motion.
  const std::vector<SegmentGeometry> one{SegmentGeometry{}};
  const Eigen::MatrixXd single = position_jacobian(Configurationd(1), one);
  EXPECT_NEAR(single(2, 1), 0.0, 1e-9);
  EXPECT_NEAR(single(0, 1), 0.5 / 3.0, 1e-9);
}

// Central differences lose accuracy as h^2: halving h quarters the error.
TEST_F(IkTest, FiniteDifferenceConvergesAtSecondOrder) {
  std::mt19937_64 rng(20);
  for (int k = 0; k < 20; ++k) {
    const auto q = random_configuration(rng, 3, 0.2, 1.2);
    const Eigen::MatrixXd ref = position_jacobian(q, geom, 1e-4);
    const double e1 = (position_jacobian(q, geom, 0.02) - ref).norm();
    const double e2 = (position_jacobian(q, geom, 0.01) - ref).norm();
    EXPECT_NEAR(e1 / e2, 4.0, 0.1);
  }
}

TEST_F(IkTest, TargetAtWarmStartIsImmediate) {
  std::mt19937_64 rng(21);
  const auto q0 = random_configuration(rng, 3, 0.1, 1.0);
  const IkSolution sol = solve_ik(TaskTarget{tip_position(q0, geom)}, q0, geom);
  EXPECT_TRUE(sol.converged);
  EXPECT_EQ(sol.iterations, 0);
  EXPECT_EQ(sol.q_star, q0);
}

TEST_F(IkTest, StraightUpTarget) {
  const Configurationd q0{SegmentConfigd{0.0, 0.35}, SegmentConfigd{0.0, 0.35},
                          SegmentConfigd{0.0, 0.35}};
  // A 1e-4 m shortfall still allows a few degrees of bend, so the straight
  // solution needs a tight tolerance to show.
  IkOptions tight;
  tight.tol_pos = 1e-6;
  const IkSolution sol = solve_ik(TaskTarget{Eigen::Vector3d(0, 0, 1.0)}, q0, geom, tight);
  EXPECT_TRUE(sol.converged);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_LT(rad2deg(sol.q_star.theta(i)), 0.5);

  const IkSolution loose = solve_ik(TaskTarget{Eigen::Vector3d(0, 0, 1.0)}, q0, geom);
  EXPECT_TRUE(loose.converged);
  EXPECT_LT(loose.residual, 1e-4);
}

TEST_F(IkTest, ReachableTargetsConverge) {
  std::mt19937_64 rng(22);
  int worst_iterations = 0;
  for (int k = 0; k < 100; ++k) {
    const auto q = random_configuration(rng, 3, deg2rad(5.0), deg2rad(60.0));
    const IkSolution sol = solve_ik(TaskTarget{tip_position(q, geom)}, perturbed(q, rng, 5.0), geom);
    ASSERT_TRUE(sol.converged) << "target " << k;
    ASSERT_LT(sol.residual, 1e-4);
    ASSERT_LT((tip_position(sol.q_star, geom) - tip_position(q, geom)).norm(), 1e-4);
    worst_iterations = std::max(worst_iterations, sol.iterations);
  }
  EXPECT_LE(worst_iterations, 50);
}

TEST_F(IkTest, IteratesStayCanonicalAndWithinLimits) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  IkOptions opts;
  opts.theta_max = deg2rad(60.0);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector3d target(u(rng), u(rng), u(rng));
    const auto q0 = random_configuration(rng, 3, 0.0, opts.theta_max);
    const IkSolution sol = solve_ik(TaskTarget{target}, q0, geom, opts);
    for (Eigen::Index i = 0; i < 3; ++i) {
      ASSERT_GE(sol.q_star.theta(i), 0.0);
      ASSERT_LE(sol.q_star.theta(i), opts.theta_max);
      ASSERT_GT(sol.q_star.phi(i), -kPiD);
      ASSERT_LE(sol.q_star.phi(i), kPiD);
    }
    // Never worse than where it started.
    ASSERT_LE(sol.residual, (target - tip_position(q0.canonical(), geom)).norm());
    EXPECT_EQ(sol.converged, sol.residual < opts.tol_pos);
  }
}

TEST_F(IkTest, Deterministic) {
  std::mt19937_64 rng(24);
  const auto q = random_configuration(rng, 3, 0.2, 1.0);
  const auto q0 = perturbed(q, rng, 10.0);
  const TaskTarget target{tip_position(q, geom)};
  const IkSolution a = solve_ik(target, q0, geom);
  const IkSolution b = solve_ik(target, q0, geom);
  EXPECT_EQ(a.q_star.stacked(), b.q_star.stacked());
  EXPECT_EQ(a.residual, b.residual);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST_F(IkTest, OnAxisTargetConverges) {
  const Configurationd q0{SegmentConfigd{0.2, 0.3}, SegmentConfigd{0.2, 0.4},
                          SegmentConfigd{-1.0, 0.2}};
  const IkSolution sol = solve_ik(TaskTarget{Eigen::Vector3d(0, 0, 0.9)}, q0, geom);
  EXPECT_TRUE(sol.converged);
  EXPECT_LT(sol.iterations, 50);
}

TEST_F(IkTest, StartsFromExactlyStraightArm) {
  const IkSolution sol =
      solve_ik(TaskTarget{Eigen::Vector3d(0.0, -0.337, 0.886)}, Configurationd(3), geom);
  EXPECT_TRUE(sol.converged);
}

TEST_F(IkTest, UnreachableTargetReportsBestEffort) {
  const TaskTarget far{Eigen::Vector3d(0, 0, 1.5)};
  EXPECT_FALSE(far.within_reach(geom));
  const IkSolution sol = solve_ik(far, Configurationd(3), geom);
  EXPECT_FALSE(sol.converged);
  EXPECT_NEAR(sol.residual, 0.5, 1e-9);
}

TEST_F(IkTest, TaskStepAtCurrentTipIsZero) {
  std::mt19937_64 rng(25);
  const auto q = random_configuration(rng, 3, 0.1, 1.0);
  const auto step = task_space_step(TaskTarget{tip_position(q, geom)}, q, ControllerGains{}, geom);
  EXPECT_TRUE(step.command.deltas.isZero(0.0));
}

TEST_F(IkTest, TaskStepComposesIkAndControlLaw) {
  std::mt19937_64 rng(26);
  const auto q = random_configuration(rng, 3, 0.1, 1.0);
  const auto goal = perturbed(q, rng, 8.0);
  const TaskTarget target{tip_position(goal, geom)};
  const auto step = task_space_step(target, q, ControllerGains{}, geom);
  ASSERT_TRUE(step.ik.converged);
  const auto expected = config_space_step(q, solve_ik(target, q, geom).q_star, ControllerGains{}, geom);
  EXPECT_EQ(step.command.deltas, expected.deltas);
}

TEST_F(IkTest, FailedSolveHoldsLastSetPoint) {
  std::mt19937_64 rng(27);
  const auto q = random_configuration(rng, 3, 0.1, 1.0);
  const auto held = perturbed(q, rng, 5.0);
  const TaskTarget far{Eigen::Vector3d(0, 0, 2.0)};

  const auto none = task_space_step(far, q, ControllerGains{}, geom);
  EXPECT_FALSE(none.ik.converged);
  EXPECT_TRUE(none.command.deltas.isZero(0.0));

  const auto kept = task_space_step(far, q, ControllerGains{}, geom, IkOptions{}, held);
  EXPECT_EQ(kept.command.deltas, config_space_step(q, held, ControllerGains{}, geom).deltas);

  TaskSpaceController controller(ControllerGains{}, IkOptions{});
  controller.step(TaskTarget{tip_position(held, geom)}, q, geom);
  ASSERT_TRUE(controller.held().has_value());
  const auto before = *controller.held();
  controller.step(far, q, geom);
  EXPECT_EQ(controller.held()->stacked(), before.stacked());
}

}  // namespace
}  // namespace tdcm

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

// Position-only inverse kinematics by damped least squares, and the
// task-space controller that feeds its solution to the configuration-space
// law.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "tdcm/kinematics.hpp"
#include "tdcm/tendon_actuation.hpp"

namespace tdcm {

struct TaskTarget {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // [m], base frame

  /// Inside the sphere of radius equal to the chain length.
  bool within_reach(std::span<const SegmentGeometry> geom) const;
};

struct IkOptions {
  double tol_pos = 1e-4;  // [m]
  int max_iter = 100;
  double lambda0 = 1e-3;
  /// Doublings of lambda tried before an iteration gives up.
  int max_backoff = 30;
  double theta_max = kDefaultThetaMax;
  double fd_step = 1e-6;  // [rad]
};

struct IkSolution {
  Configurationd q_star;
  double residual = 0.0;  // [m]
  int iterations = 0;
  bool converged = false;
};

/// d(tip position)/dq by central differences, 3 x 2n.
Eigen::MatrixXd position_jacobian(const Configurationd& q,
                                  std::span<const SegmentGeometry> geom,
                                  double step = 1e-6);

/// Canonical chart with every theta clamped to theta_max.
Configurationd project_to_limits(const Configurationd& q, double theta_max);

/// Never throws on non-convergence: the best iterate comes back with
/// converged == false and its residual.
IkSolution solve_ik(const TaskTarget& target, const Configurationd& q0,
                    std::span<const SegmentGeometry> geom,
                    const IkOptions& options = {});

struct TaskStepResult {
  TendonCommand command;
  IkSolution ik;
  /// The configuration actually regulated towards this tick, if any.
  std::optional<Configurationd> q_desired;
};

/// Solves IK warm-started at q and applies config_space_step towards the
/// solution. When the solver fails the command regulates towards `held`
/// instead, or is zero when nothing is held.
TaskStepResult task_space_step(const TaskTarget& target, const Configurationd& q,
                               const ControllerGains& gains,
                               std::span<const SegmentGeometry> geom,
                               const IkOptions& options = {},
                               const std::optional<Configurationd>& held = {});

/// Keeps the last converged IK solution between ticks.
class TaskSpaceController {
 public:
  TaskSpaceController(ControllerGains gains, IkOptions options)
      : gains_(gains), options_(options) {}

  TaskStepResult step(const TaskTarget& target, const Configurationd& q,
                      std::span<const SegmentGeometry> geom);

  const std::optional<Configurationd>& held() const { return held_; }
  void reset() { held_.reset(); }

 private:
  ControllerGains gains_;
  IkOptions options_;
  std::optional<Configurationd> held_;
};

}  // namespace tdcm

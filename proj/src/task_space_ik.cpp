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

#include <algorithm>
#include <cmath>

namespace tdcm {

bool TaskTarget::within_reach(std::span<const SegmentGeometry> geom) const {
  return position.norm() <= chain_length(geom);
}

Eigen::MatrixXd position_jacobian(const Configurationd& q,
                                  std::span<const SegmentGeometry> geom,
                                  double step) {
  const Eigen::Index n = q.stacked().size();
  Eigen::MatrixXd jac(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Configurationd plus = q, minus = q;
    plus.stacked()(k) += step;
    minus.stacked()(k) -= step;
    jac.col(k) = (tip_position(plus, geom) - tip_position(minus, geom)) / (2.0 * step);
  }
  return jac;
}

Configurationd project_to_limits(const Configurationd& q, double theta_max) {
  Configurationd out = q.canonical();
  for (Eigen::Index i = 0; i < out.segment_count(); ++i) {
    out.theta(i) = std::min(out.theta(i), theta_max);
  }
  return out;
}

namespace {

// The solver works on bend vectors b_i = theta_i * [cos phi_i, sin phi_i],
// which stay smooth through the straight pose where phi loses meaning.
Eigen::VectorXd to_bend(const Configurationd& q) {
  Eigen::VectorXd b(q.stacked().size());
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    b(2 * i) = q.theta(i) * std::cos(q.phi(i));
    b(2 * i + 1) = q.theta(i) * std::sin(q.phi(i));
  }
  return b;
}

Configurationd from_bend(const Eigen::VectorXd& b, double theta_max) {
  Configurationd q(b.size() / 2);
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    const double theta = std::hypot(b(2 * i), b(2 * i + 1));
    q.set_segment(i, {theta < kSingularTheta ? 0.0 : std::atan2(b(2 * i + 1), b(2 * i)),
                      std::min(theta, theta_max)});
  }
  return q;
}

Eigen::MatrixXd bend_jacobian(const Eigen::VectorXd& b,
                              std::span<const SegmentGeometry> geom, double step) {
  Eigen::MatrixXd jac(3, b.size());
  for (Eigen::Index k = 0; k < b.size(); ++k) {
    Eigen::VectorXd plus = b, minus = b;
    plus(k) += step;
    minus(k) -= step;
    jac.col(k) = (tip_position(from_bend(plus, kPi<double>), geom) -
                  tip_position(from_bend(minus, kPi<double>), geom)) /
                 (2.0 * step);
  }
  return jac;
}

}  // namespace

IkSolution solve_ik(const TaskTarget& target, const Configurationd& q0,
                    std::span<const SegmentGeometry> geom,
                    const IkOptions& options) {
  IkSolution sol;
  sol.q_star = project_to_limits(q0, options.theta_max);
  Eigen::VectorXd bend = to_bend(sol.q_star);
  Eigen::Vector3d err = target.position - tip_position(sol.q_star, geom);
  sol.residual = err.norm();
  if (sol.residual < options.tol_pos) {
    sol.converged = true;
    return sol;
  }

  const Eigen::Index n = bend.size();
  double lambda = options.lambda0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const Eigen::MatrixXd jac = bend_jacobian(bend, geom, options.fd_step);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jte = jac.transpose() * err;

    bool accepted = false;
    for (int backoff = 0; backoff <= options.max_backoff; ++backoff) {
      const Eigen::MatrixXd damped =
          jtj + lambda * lambda * Eigen::MatrixXd::Identity(n, n);
      const Configurationd candidate =
          from_bend(bend + damped.ldlt().solve(jte), options.theta_max);
      const Eigen::Vector3d cand_err = target.position - tip_position(candidate, geom);
      if (cand_err.norm() < sol.residual) {
        sol.q_star = candidate;
        bend = to_bend(candidate);
        err = cand_err;
        sol.residual = cand_err.norm();
        lambda = std::max(lambda * 0.5, options.lambda0);
        accepted = true;
        break;
      }
      lambda *= 2.0;
    }
    if (!accepted) break;  // stalled; best iterate already held
    sol.iterations = it;
    if (sol.residual < options.tol_pos) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

TaskStepResult task_space_step(const TaskTarget& target, const Configurationd& q,
                               const ControllerGains& gains,
                               std::span<const SegmentGeometry> geom,
                               const IkOptions& options,
                               const std::optional<Configurationd>& held) {
  TaskStepResult result;
  result.ik = solve_ik(target, q, geom, options);
  if (result.ik.converged) {
    result.q_desired = result.ik.q_star;
  } else {
    result.q_desired = held;
  }
  if (result.q_desired) {
    result.command = config_space_step(q, *result.q_desired, gains, geom);
  } else {
    result.command = TendonCommand::Zero(q.segment_count(), tendons_per_segment(geom));
  }
  return result;
}

TaskStepResult TaskSpaceController::step(const TaskTarget& target,
                                         const Configurationd& q,
                                         std::span<const SegmentGeometry> geom) {
  TaskStepResult result = task_space_step(target, q, gains_, geom, options_, held_);
  if (result.ik.converged) held_ = result.ik.q_star;
  return result;
}

}  // namespace tdcm

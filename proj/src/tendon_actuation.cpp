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

#include "tdcm/tendon_actuation.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tdcm/angles.hpp"
#include "tdcm/state_estimation.hpp"

namespace tdcm {

void validate(const ControllerGains& gains) {
  if (!(gains.gamma > 0.0 && gains.gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1]");
  }
  if (!(gains.tau_min > 0.0)) throw std::invalid_argument("tau_min must be positive");
  if (!(gains.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(gains.tick_period > 0.0)) {
    throw std::invalid_argument("tick_period must be positive");
  }
  if (!(gains.max_delta > 0.0)) {
    throw std::invalid_argument("max_delta must be positive");
  }
}

int tendons_per_segment(std::span<const SegmentGeometry> geom) {
  if (geom.empty()) throw std::invalid_argument("empty chain");
  const int n = geom.front().tendon_count;
  for (const auto& g : geom) {
    validate(g);
    if (g.tendon_count != n) {
      throw std::invalid_argument("all segments must carry the same tendon count");
    }
  }
  return n;
}

double tendon_angle(int j, int tendon_count) {
  return (2.0 * j + 1.0) * kPi<double> / tendon_count;
}

TendonLengths tendon_lengths(const Configurationd& q,
                             std::span<const SegmentGeometry> geom) {
  if (q.segment_count() != static_cast<Eigen::Index>(geom.size())) {
    throw MismatchedChainLength(q.segment_count(), static_cast<long>(geom.size()));
  }
  const int nt = tendons_per_segment(geom);
  TendonLengths out{Eigen::MatrixXd(q.segment_count(), nt)};
  double backbone = 0.0;
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    backbone += geom[i].length;
    const auto s = q.segment(i);
    for (int j = 0; j < nt; ++j) {
      out.lengths(i, j) = backbone - geom[i].tendon_radius * s.theta *
                                         std::cos(tendon_angle(j, nt) - s.phi);
    }
  }
  return out;
}

TendonJacobian tendon_jacobian(const Configurationd& q,
                               std::span<const SegmentGeometry> geom) {
  if (q.segment_count() != static_cast<Eigen::Index>(geom.size())) {
    throw MismatchedChainLength(q.segment_count(), static_cast<long>(geom.size()));
  }
  const int nt = tendons_per_segment(geom);
  const Eigen::Index n = q.segment_count();
  TendonJacobian jac;
  jac.full = Eigen::MatrixXd::Zero(n * nt, 2 * n);
  jac.square = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  jac.singular_segments.assign(n, false);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto s = q.segment(i);
    const double r = geom[i].tendon_radius;
    for (int j = 0; j < nt; ++j) {
      const double a = tendon_angle(j, nt) - s.phi;
      const Eigen::Index row = i * nt + j;
      jac.full(row, 2 * i) = -r * s.theta * std::sin(a);
      jac.full(row, 2 * i + 1) = -r * std::cos(a);
    }
    jac.square.block(2 * i, 0, 2, 2 * n) = jac.full.block(i * nt, 0, 2, 2 * n);

    // Per-segment block: singular values r and r*|theta| up to the tendon
    // layout, so the ratio reduces to |theta| times a layout constant.
    Eigen::JacobiSVD<Eigen::Matrix2d> block_svd(
        jac.square.block<2, 2>(2 * i, 2 * i).eval());
    const auto sv = block_svd.singularValues();
    jac.singular_segments[i] = !(sv(1) > sv(0) / kSingularCondition);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac.square);
  const auto sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  jac.condition =
      smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  jac.singular = jac.condition > kSingularCondition;
  return jac;
}

Eigen::VectorXd configuration_error(const Configurationd& q,
                                    const Configurationd& q_d) {
  if (q.segment_count() != q_d.segment_count()) {
    throw MismatchedChainLength(q.segment_count(), q_d.segment_count());
  }
  Eigen::VectorXd dq = q_d.stacked() - q.stacked();
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    dq(2 * i) = wrap_shortest(dq(2 * i));
  }
  return dq;
}

TendonCommand config_space_command(const Configurationd& q,
                                   const Configurationd& q_d,
                                   const ControllerGains& gains,
                                   std::span<const SegmentGeometry> geom) {
  Eigen::VectorXd dq = configuration_error(q, q_d);
  const TendonJacobian jac = tendon_jacobian(q, geom);
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    // No plane to reach or leave when either end is straight.
    if (jac.singular_segments[i] || q_d.theta(i) < kSingularTheta) dq(2 * i) = 0.0;
  }
  const Eigen::VectorXd dl = gains.gamma * (jac.full * dq);
  const Eigen::Index nt = jac.full.rows() / q.segment_count();
  TendonCommand cmd{Eigen::MatrixXd(q.segment_count(), nt)};
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    cmd.deltas.row(i) = dl.segment(i * nt, nt).transpose();
  }
  return cmd;
}

TendonCommand rate_limit(const TendonCommand& cmd, double max_delta) {
  const double peak = cmd.deltas.size() ? cmd.deltas.cwiseAbs().maxCoeff() : 0.0;
  if (peak <= max_delta) return cmd;
  return {cmd.deltas * (max_delta / peak)};
}

TendonCommand clamp_entries(const TendonCommand& cmd, double max_delta) {
  return {cmd.deltas.cwiseMax(-max_delta).cwiseMin(max_delta)};
}

TendonCommand config_space_step(const Configurationd& q,
                                const Configurationd& q_d,
                                const ControllerGains& gains,
                                std::span<const SegmentGeometry> geom) {
  return rate_limit(config_space_command(q, q_d, gains, geom), gains.max_delta);
}

TendonCommand supervise_tension(const TendonCommand& cmd,
                                const TensionReadings& readings,
                                const ControllerGains& gains) {
  if (cmd.deltas.rows() != readings.tensions.rows() ||
      cmd.deltas.cols() != readings.tensions.cols()) {
    throw std::invalid_argument("command and tension readings differ in shape");
  }
  TendonCommand out = cmd;
  for (Eigen::Index i = 0; i < out.deltas.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.deltas.cols(); ++j) {
      const double tau = readings.tensions(i, j);
      // Reel in: a positive delta would pay out more cable and deepen the slack.
      if (tau < gains.tau_min) out.deltas(i, j) -= gains.alpha * (gains.tau_min - tau);
    }
  }
  return out;
}

}  // namespace tdcm

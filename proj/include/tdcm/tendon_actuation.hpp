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

// Actuator-space mapping between arc parameters and tendon lengths, the
// configuration-space control law built on it, and slack-tendon
// supervision.
//
// Tendon matrices are (segments x tendons_per_segment). Stacked 12-row forms
// use row index `segment * tendons_per_segment + tendon`.

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "tdcm/kinematics.hpp"

namespace tdcm {

struct TendonLengths {
  Eigen::MatrixXd lengths;  // [m]
};

/// Per-tick tendon length changes; positive pays the tendon out.
struct TendonCommand {
  Eigen::MatrixXd deltas;  // [m]

  static TendonCommand Zero(Eigen::Index segments, Eigen::Index tendons) {
    return {Eigen::MatrixXd::Zero(segments, tendons)};
  }
};

struct TensionReadings {
  Eigen::MatrixXd tensions;  // [N], never negative
};

struct ControllerGains {
  double gamma = 0.3;         // reduction factor, (0, 1]
  double tau_min = 2.0;       // [N]
  double alpha = 0.005;       // [m/N]
  double tick_period = 0.05;  // [s]
  double max_delta = 0.005;   // per-tick |dl| limit [m]
};

/// Throws std::invalid_argument when a gain is outside its valid range.
void validate(const ControllerGains& gains);

/// Tendons per segment shared by the whole chain. Throws
/// std::invalid_argument when segments disagree.
int tendons_per_segment(std::span<const SegmentGeometry> geom);

/// Angular position of tendon `j` (0-based) around the backbone.
double tendon_angle(int j, int tendon_count);

TendonLengths tendon_lengths(const Configurationd& q,
                             std::span<const SegmentGeometry> geom);

/// Condition number above which the square Jacobian is flagged singular.
inline constexpr double kSingularCondition = 1e8;

struct TendonJacobian {
  /// Rows for the first two tendons of every segment: square (2n x 2n).
  Eigen::MatrixXd square;
  /// All tendons, (n * tendons_per_segment) x 2n.
  Eigen::MatrixXd full;
  double condition = 0.0;
  /// condition > kSingularCondition.
  bool singular = false;
  /// Segments whose phi column vanishes (zero curvature).
  std::vector<bool> singular_segments;
};

TendonJacobian tendon_jacobian(const Configurationd& q,
                               std::span<const SegmentGeometry> geom);

/// q_d - q with every bending-plane component taken the short way round.
Eigen::VectorXd configuration_error(const Configurationd& q,
                                    const Configurationd& q_d);

/// gamma * J * dq over all tendons, before rate limiting. Bending-plane
/// errors are dropped where the current or desired segment is straight.
TendonCommand config_space_command(const Configurationd& q,
                                   const Configurationd& q_d,
                                   const ControllerGains& gains,
                                   std::span<const SegmentGeometry> geom);

/// Scales the whole command so no entry exceeds max_delta, keeping its
/// direction.
TendonCommand rate_limit(const TendonCommand& cmd, double max_delta);

/// Clamps each entry into [-max_delta, max_delta].
TendonCommand clamp_entries(const TendonCommand& cmd, double max_delta);

TendonCommand config_space_step(const Configurationd& q,
                                const Configurationd& q_d,
                                const ControllerGains& gains,
                                std::span<const SegmentGeometry> geom);

/// For every tendon reading strictly below tau_min, reels it in by
/// alpha * (tau_min - tau). Other entries pass through untouched.
TendonCommand supervise_tension(const TendonCommand& cmd,
                                const TensionReadings& readings,
                                const ControllerGains& gains);

}  // namespace tdcm

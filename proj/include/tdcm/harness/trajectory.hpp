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

#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "tdcm/kinematics.hpp"

namespace tdcm::harness {

enum class TrajectoryMode { kConfigSpace, kTaskSpace };

std::string to_string(TrajectoryMode mode);
TrajectoryMode trajectory_mode_from_string(const std::string& name);

struct TrajectorySpec {
  TrajectoryMode mode = TrajectoryMode::kConfigSpace;
  std::vector<Configurationd> config_setpoints;  // kConfigSpace
  std::vector<Eigen::Vector3d> task_setpoints;   // kTaskSpace, [m]
  double dwell = 45.0;                           // [s] per set-point
  double steady_window = 5.0;                    // [s] at the end of each dwell
  std::string label;

  std::size_t setpoint_count() const;
};

/// Throws ConfigError unless dwell > steady_window > 0, there is at least one
/// set-point, and config set-points match `segments`.
void validate(const TrajectorySpec& spec, Eigen::Index segments);

/// Whole ticks in a duration, rejecting durations that are not a multiple of
/// the tick period.
long ticks_for(double seconds, double tick_period);

/// A posture as tabulated: bending-plane and curvature angles in degrees,
/// curvature possibly negative.
struct PostureDeg {
  std::array<double, 3> phi;
  std::array<double, 3> theta;
};

/// The eight postures of the configuration-space tracking test, as printed.
std::span<const PostureDeg> tracking_postures();

/// Converts a tabulated posture to a canonical configuration (theta >= 0).
Configurationd to_configuration(const PostureDeg& posture);

/// Configuration-space tracking through the eight postures.
TrajectorySpec table_posture_trajectory();

/// Task-space targets reconstructed as the tip positions of the eight
/// tracking postures.
TrajectorySpec reconstructed_task_trajectory(std::span<const SegmentGeometry> geom);

/// The held set-point of the disturbance tests.
Configurationd disturbance_setpoint();

}  // namespace tdcm::harness

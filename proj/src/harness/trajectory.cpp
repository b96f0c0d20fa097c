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

#include "tdcm/harness/trajectory.hpp"

#include <array>
#include <cmath>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"

namespace tdcm::harness {
namespace {

constexpr std::array<PostureDeg, 8> kPostures = {{
    {{-90, -90, -90}, {0, 40, 5}},
    {{-90, -90, -90}, {40, 10, -5}},
    {{-90, -90, -90}, {40, 10, 35}},
    {{-90, -90, -90}, {40, 10, -40}},
    {{-45, -45, -45}, {40, 10, -5}},
    {{-45, -45, -45}, {40, 10, 35}},
    {{-45, -45, 0}, {40, 10, 35}},
    {{-45, -45, -90}, {40, 10, 35}},
}};

}  // namespace

std::string to_string(TrajectoryMode mode) {
  return mode == TrajectoryMode::kConfigSpace ? "config_space" : "task_space";
}

TrajectoryMode trajectory_mode_from_string(const std::string& name) {
  if (name == "config_space") return TrajectoryMode::kConfigSpace;
  if (name == "task_space") return TrajectoryMode::kTaskSpace;
  throw ConfigError("unknown trajectory mode '" + name + "'");
}

std::size_t TrajectorySpec::setpoint_count() const {
  return mode == TrajectoryMode::kConfigSpace ? config_setpoints.size()
                                              : task_setpoints.size();
}

void validate(const TrajectorySpec& spec, Eigen::Index segments) {
  if (!(spec.steady_window > 0.0) || !(spec.dwell > spec.steady_window)) {
    throw ConfigError("trajectory needs dwell > steady_window > 0");
  }
  if (spec.setpoint_count() == 0) throw ConfigError("trajectory has no set-points");
  if (spec.mode == TrajectoryMode::kConfigSpace) {
    for (const auto& q : spec.config_setpoints) {
      if (q.segment_count() != segments) {
        throw ConfigError("set-point segment count does not match the geometry");
      }
    }
  }
}

long ticks_for(double seconds, double tick_period) {
  const double ticks = seconds / tick_period;
  const double rounded = std::round(ticks);
  if (std::abs(ticks - rounded) > 1e-6) {
    throw ConfigError("duration " + std::to_string(seconds) +
                      " s is not a whole number of ticks");
  }
  return static_cast<long>(rounded);
}

std::span<const PostureDeg> tracking_postures() { return kPostures; }

Configurationd to_configuration(const PostureDeg& posture) {
  Configurationd q(3);
  for (int i = 0; i < 3; ++i) {
    q.set_segment(i, canonicalize(SegmentConfigd{deg2rad(posture.phi[i]),
                                                 deg2rad(posture.theta[i])}));
  }
  return q;
}

TrajectorySpec table_posture_trajectory() {
  TrajectorySpec spec;
  spec.mode = TrajectoryMode::kConfigSpace;
  spec.label = "table_postures";
  for (const auto& p : kPostures) spec.config_setpoints.push_back(to_configuration(p));
  return spec;
}

TrajectorySpec reconstructed_task_trajectory(std::span<const SegmentGeometry> geom) {
  TrajectorySpec spec;
  spec.mode = TrajectoryMode::kTaskSpace;
  spec.label = "reconstructed_from_table_postures";
  for (const auto& p : kPostures) {
    spec.task_setpoints.push_back(tip_position(to_configuration(p), geom));
  }
  return spec;
}

Configurationd disturbance_setpoint() {
  return to_configuration(PostureDeg{{-90, -90, -90}, {40, 10, 35}});
}

}  // namespace tdcm::harness

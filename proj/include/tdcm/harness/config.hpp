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

// Harness configuration: one JSON document holding geometry, gains, plant
// calibration, trajectories, disturbance schedule, seeds and the pass/fail
// thresholds a run is judged against. Every key is optional; missing keys
// keep the defaults below.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdcm/harness/trajectory.hpp"
#include "tdcm/kinematics.hpp"
#include "tdcm/plant_sim.hpp"
#include "tdcm/task_space_ik.hpp"
#include "tdcm/tendon_actuation.hpp"

namespace tdcm::harness {

struct ComplianceCalibration {
  double mass = 0.3;             // [kg]
  double deflection_deg = 6.0;   // open-loop bend of the most affected segment
  // Explicit per-segment gains; when set, calibration is skipped.
  std::optional<std::vector<double>> deflection_gain;
};

struct DisturbanceSuiteConfig {
  double settle = 20.0;                      // [s] before, between and after loads
  std::vector<double> tip_masses{0.2, 0.3};  // [kg], attached one after another
  double load_hold = 20.0;                   // [s]
  double load_ramp = 0.5;                    // [s] to attach a mass by hand
  int point_loads = 4;
  double point_load_deg = 5.0;
  double point_load_hold = 5.0;              // [s]
  double point_load_gap = 15.0;              // [s]
  double recovery_threshold_deg = 1.0;
};

struct Thresholds {
  double config_rmse_deg = 5.0;
  double config_rmse_noiseless_deg = 1.0;
  double trial_spread_deg = 2.0;
  double task_rmse_fraction = 0.03;  // of total arm length
  double task_rmse_noiseless = 1e-3; // [m]
  double max_disturbance_deg = 6.0;
};

struct HarnessConfig {
  std::vector<SegmentGeometry> geometry{3};
  ControllerGains gains;
  IkOptions ik;
  PlantParams plant;
  double noise_sigma = 1e-3;
  ComplianceCalibration compliance;
  Configurationd initial{Configurationd(3)};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  // Empty: the tabulated postures (config) or their tip positions (task).
  std::optional<TrajectorySpec> config_trajectory;
  std::optional<TrajectorySpec> task_trajectory;
  // Extra disturbances injected into tracking runs.
  std::vector<DisturbanceSpec> disturbances;
  DisturbanceSuiteConfig suite;
  Thresholds thresholds;

  /// Noise and lag both disabled.
  bool idealized() const { return noise_sigma == 0.0 && plant.lag_constant <= 0.0; }
};

/// Throws ConfigError on any inconsistent value.
void validate(const HarnessConfig& config);

/// Deflection gains from `compliance`, calibrating at the disturbance
/// set-point when no explicit gains are given.
ComplianceModel resolve_compliance(const HarnessConfig& config);

TrajectorySpec config_trajectory(const HarnessConfig& config);
TrajectorySpec task_trajectory(const HarnessConfig& config);

HarnessConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const HarnessConfig& config);
/// Throws IoError when the file cannot be read, ConfigError when malformed.
HarnessConfig load_config(const std::string& path);
/// A trajectory document: {"mode", "setpoints", "dwell", "steady_window"}.
/// Config set-points are [[phi_deg, theta_deg], ...] per segment; task
/// set-points are [x, y, z] in metres.
TrajectorySpec trajectory_from_json(const nlohmann::json& j);
nlohmann::json trajectory_to_json(const TrajectorySpec& spec);
TrajectorySpec load_trajectory(const std::string& path);

}  // namespace tdcm::harness

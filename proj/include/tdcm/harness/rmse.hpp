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

// Steady-state tracking error: RMSE over the final steady_window of every
// set-point dwell, per variable, with trial-to-trial spread when several
// runs are combined.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdcm/harness/run_log.hpp"
#include "tdcm/harness/trajectory.hpp"

namespace tdcm::harness {

/// Desired curvature below which the bending-plane error is zero: every
/// plane describes the same straight segment.
inline constexpr double kGaugeTheta = 1e-6;

struct RmseEntry {
  int setpoint = 0;
  std::string variable;  // phi1, theta1, ... or x, y, z, position
  std::string unit;      // "deg" or "m"
  double rmse = 0.0;     // mean over trials
  double spread = 0.0;   // sample standard deviation over trials
  std::vector<double> per_trial;
  bool gauge = false;    // bending-plane error undefined at zero curvature

  friend bool operator==(const RmseEntry&, const RmseEntry&) = default;
};

struct RmseReport {
  TrajectoryMode mode = TrajectoryMode::kConfigSpace;
  double dwell = 45.0;
  double steady_window = 5.0;
  int trials = 1;
  std::vector<RmseEntry> entries;

  const RmseEntry* find(int setpoint, const std::string& variable) const;
  double max_rmse() const;
  double max_spread() const;

  friend bool operator==(const RmseReport&, const RmseReport&) = default;
};

/// Ground-truth errors against the logged set-points. Throws IncompleteLog
/// when a steady window is missing ticks.
RmseReport compute_rmse(const RunLog& log, const TrajectorySpec& spec,
                        double tick_period);

/// Mean and sample standard deviation per entry across trials. Throws
/// std::invalid_argument when the reports do not describe the same entries.
RmseReport combine_trials(std::span<const RmseReport> reports);

nlohmann::json report_to_json(const RmseReport& report);
RmseReport report_from_json(const nlohmann::json& j);
void write_report_json(const RmseReport& report, const std::string& path);
RmseReport read_report_json(const std::string& path);

}  // namespace tdcm::harness

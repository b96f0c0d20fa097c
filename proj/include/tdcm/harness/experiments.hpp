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

// Closed-loop experiment runners: estimate -> control -> supervise -> plant,
// once per tick, over a set-point schedule.

#pragma once

#include <cstdint>
#include <vector>

#include "tdcm/harness/config.hpp"
#include "tdcm/harness/rmse.hpp"
#include "tdcm/harness/run_log.hpp"
#include "tdcm/harness/trajectory.hpp"

namespace tdcm::harness {

/// Runs the whole schedule. Deterministic in (spec, seed, config).
RunLog run_trajectory(const TrajectorySpec& spec, std::uint64_t seed,
                      const HarnessConfig& config,
                      const std::vector<DisturbanceSpec>& disturbances = {});

struct TrialSet {
  std::vector<RunLog> logs;        // one per seed, in seed order
  std::vector<RmseReport> reports;
  RmseReport combined;
};

/// One run per configured seed; runs execute concurrently with no shared
/// state.
TrialSet run_trials(const TrajectorySpec& spec, const HarnessConfig& config);

/// Per-variable absolute error of a record against its set-point: degrees,
/// stacked like the configuration, bending-plane error zero where the
/// desired curvature is zero.
Eigen::VectorXd configuration_deviation_deg(const RunRecord& record);

/// Per-segment distance between the actual and desired bend vectors
/// theta * [cos phi, sin phi], in degrees. Unlike the bending-plane error it
/// does not blow up at small curvature.
Eigen::VectorXd bend_deviation_deg(const RunRecord& record);

/// Ticks the scalar loop "command += gamma * error; shape follows the
/// command by `follow` per tick" needs to bring a step offset of `initial`
/// below `threshold` for good.
long contraction_ticks(double gamma, double follow, double initial, double threshold);

/// Recovery budget for a closed loop with these gains and lag: twice the
/// scalar contraction time plus two ticks of sensing delay.
long recovery_tick_bound(const HarnessConfig& config, double initial_deg,
                         double threshold_deg);

struct DisturbanceEvent {
  DisturbanceSpec spec;
  double max_deviation_deg = 0.0;   // while applied
  long onset_recovery_ticks = -1;   // from application until below threshold
  long release_recovery_ticks = -1; // from release until below threshold
  double settled_rms_deg = 0.0;     // worst variable, final 5 s before the next event
};

struct DisturbanceSuiteResult {
  TrajectorySpec trajectory;
  RunLog log;
  RmseReport report;
  std::vector<DisturbanceEvent> events;
  long recovery_tick_bound = 0;
};

/// The load schedule of the suite: tip masses attached and released in
/// turn, then point loads on random segments in random directions.
std::vector<DisturbanceSpec> disturbance_schedule(const HarnessConfig& config,
                                                  std::uint64_t seed);
/// Total duration of the suite [s].
double disturbance_suite_duration(const HarnessConfig& config);

DisturbanceSuiteResult run_disturbance_suite(const HarnessConfig& config,
                                             std::uint64_t seed);

struct SlackScenario {
  int segment = 0;
  int tendon = 0;
  double excess_payout = 0.002;  // [m] beyond the geometric length
  // Supervision threshold for the scenario. It must sit above the slack
  // tension (rest_tension - stiffness * excess) or nothing triggers.
  double tau_min = 3.5;  // [N]
  long ticks = 10;
};

struct SlackScenarioResult {
  // Tension of the slack tendon after each tick; entry 0 is before the
  // first command.
  std::vector<double> tension;
  // First tick after which tension >= tau_min; -1 if never.
  long recovery_ticks = -1;
  // Supervision changed only the slack tendon on every tick.
  bool others_untouched = true;
  double tau_min = 0.0;
};

/// Holds the plant on `config.initial` with one tendon paid out too far and
/// runs the regulation loop with tension supervision.
SlackScenarioResult run_slack_scenario(const HarnessConfig& config,
                                       const SlackScenario& scenario,
                                       std::uint64_t seed);

}  // namespace tdcm::harness

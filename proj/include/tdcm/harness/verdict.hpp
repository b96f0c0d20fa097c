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

// Pass/fail judgement of experiment results against the configured
// thresholds. Shared by the CLI exit code and the acceptance suite.

#pragma once

#include <string>
#include <vector>

#include "tdcm/harness/config.hpp"
#include "tdcm/harness/experiments.hpp"

namespace tdcm::harness {

struct Verdict {
  bool pass = true;
  std::vector<std::string> lines;  // one per check, prefixed PASS/FAIL

  void check(bool ok, const std::string& what);
};

/// Every steady-state RMSE below the noisy (or, for an idealized plant, the
/// noiseless) limit; trial spread below its limit.
Verdict judge_config_tracking(const TrialSet& trials, const HarnessConfig& config);

/// End-effector RMSE below a fraction of the arm length (or the noiseless
/// absolute limit for an idealized plant).
Verdict judge_task_tracking(const TrialSet& trials, const HarnessConfig& config);

/// Tip loads stay within the deviation limit and are recovered after
/// release; point loads decay within the recovery bound.
Verdict judge_disturbance(const DisturbanceSuiteResult& result, const HarnessConfig& config);

/// Tension back above tau_min within the scenario's ticks, with no other
/// tendon touched by supervision.
Verdict judge_slack(const SlackScenarioResult& result, long max_ticks);

}  // namespace tdcm::harness

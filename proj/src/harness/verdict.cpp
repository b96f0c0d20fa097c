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

#include "tdcm/harness/verdict.hpp"

#include <cstdio>

namespace tdcm::harness {
namespace {

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace

void Verdict::check(bool ok, const std::string& what) {
  pass = pass && ok;
  lines.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
}

Verdict judge_config_tracking(const TrialSet& trials, const HarnessConfig& config) {
  Verdict v;
  const double limit = config.idealized() ? config.thresholds.config_rmse_noiseless_deg
                                          : config.thresholds.config_rmse_deg;
  double worst = 0.0;
  for (const auto& r : trials.reports) worst = std::max(worst, r.max_rmse());
  v.check(worst < limit, format("max steady-state RMSE %.3f deg < %.3f deg", worst, limit));
  if (trials.reports.size() > 1) {
    const double spread = trials.combined.max_spread();
    v.check(spread < config.thresholds.trial_spread_deg,
            format("max trial spread %.3f deg < %.3f deg", spread,
                   config.thresholds.trial_spread_deg));
  }
  return v;
}

Verdict judge_task_tracking(const TrialSet& trials, const HarnessConfig& config) {
  Verdict v;
  const double limit = config.idealized()
                           ? config.thresholds.task_rmse_noiseless
                           : config.thresholds.task_rmse_fraction * chain_length(config.geometry);
  double worst = 0.0;
  for (const auto& r : trials.reports) {
    for (const auto& e : r.entries) {
      if (e.variable == "position") worst = std::max(worst, e.rmse);
    }
  }
  v.check(worst < limit, format("max steady-state position RMSE %.4f m < %.4f m", worst, limit));
  return v;
}

Verdict judge_disturbance(const DisturbanceSuiteResult& result, const HarnessConfig& config) {
  Verdict v;
  const double threshold = config.suite.recovery_threshold_deg;
  for (const auto& ev : result.events) {
    const bool tip = ev.spec.kind == DisturbanceKind::kTipLoad;
    const std::string name = tip ? format("tip load %.0f g", ev.spec.magnitude * 1000.0)
                                 : format("point load on segment %d", ev.spec.segment_index + 1);
    if (tip) {
      v.check(ev.max_deviation_deg <= config.thresholds.max_disturbance_deg,
              name + format(": max deviation %.3f deg <= %.3f deg", ev.max_deviation_deg,
                            config.thresholds.max_disturbance_deg));
    } else {
      const bool ok = ev.onset_recovery_ticks >= 0 &&
                      ev.onset_recovery_ticks <= result.recovery_tick_bound;
      v.check(ok, name + format(": bend deviation below %.1f deg after %ld ticks (bound %ld)",
                                threshold, ev.onset_recovery_ticks, result.recovery_tick_bound));
    }
    const bool released = ev.release_recovery_ticks >= 0 &&
                          (tip || ev.release_recovery_ticks <= result.recovery_tick_bound);
    v.check(released, name + format(": recovers after release in %ld ticks", ev.release_recovery_ticks));
    v.check(ev.settled_rms_deg < threshold,
            name + format(": settled RMS deviation %.3f deg < %.3f deg", ev.settled_rms_deg,
                          threshold));
  }
  return v;
}

Verdict judge_slack(const SlackScenarioResult& result, long max_ticks) {
  Verdict v;
  const double first = result.tension.empty() ? 0.0 : result.tension.front();
  const double last = result.tension.empty() ? 0.0 : result.tension.back();
  v.check(result.recovery_ticks >= 0 && result.recovery_ticks <= max_ticks,
          format("slack tendon %.3f N -> %.3f N, back above %.3f N after %ld ticks (limit %ld)",
                 first, last, result.tau_min, result.recovery_ticks, max_ticks));
  v.check(result.others_untouched, "supervision modified only the slack tendon");
  return v;
}

}  // namespace tdcm::harness

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

#include "tdcm/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"
#include "tdcm/plant_sim.hpp"
#include "tdcm/state_estimation.hpp"
#include "tdcm/task_space_ik.hpp"

namespace tdcm::harness {
namespace {

std::string disturbance_label(const std::vector<DisturbanceSpec>& active) {
  if (active.empty()) return "none";
  std::string out;
  for (const auto& d : active) {
    if (!out.empty()) out += "+";
    out += to_string(d.kind);
    if (d.kind == DisturbanceKind::kTipLoad) {
      out += ":" + std::to_string(d.magnitude) + "kg";
    } else {
      out += "@" + std::to_string(d.segment_index + 1) + ":" +
             std::to_string(rad2deg(d.magnitude)) + "deg";
    }
  }
  return out;
}

}  // namespace

RunLog run_trajectory(const TrajectorySpec& spec, std::uint64_t seed,
                      const HarnessConfig& config,
                      const std::vector<DisturbanceSpec>& disturbances) {
  validate(config);
  const auto n = static_cast<Eigen::Index>(config.geometry.size());
  validate(spec, n);
  const std::span<const SegmentGeometry> geom = config.geometry;
  const double dt = config.gains.tick_period;
  const long dwell = ticks_for(spec.dwell, dt);
  ticks_for(spec.steady_window, dt);

  SimulatedPlant plant(config.geometry, config.plant, resolve_compliance(config),
                       config.initial, config.noise_sigma, seed);
  for (const auto& d : disturbances) plant.schedule(d);
  TaskSpaceController task_controller(config.gains, config.ik);

  RunLog log;
  log.segments = static_cast<int>(n);
  log.tendons = tendons_per_segment(geom);
  log.records.reserve(spec.setpoint_count() * static_cast<std::size_t>(dwell));

  for (std::size_t k = 0; k < spec.setpoint_count(); ++k) {
    for (long s = 0; s < dwell; ++s) {
      RunRecord rec;
      rec.tick = plant.state().tick;
      rec.time = static_cast<double>(rec.tick) * dt;
      rec.setpoint = static_cast<int>(k);
      rec.q_true = plant.state().q_true;
      rec.t_true = tip_position(rec.q_true, geom);
      rec.disturbance = disturbance_label(plant.active_disturbances());

      const SensorSample sample = plant.read();
      rec.q_est = estimate_configuration(sample.frames);
      rec.t_est = tip_position(rec.q_est, geom);
      rec.tensions = sample.tensions.tensions;

      TendonCommand cmd;
      if (spec.mode == TrajectoryMode::kConfigSpace) {
        rec.q_d = spec.config_setpoints[k];
        rec.t_d = tip_position(rec.q_d, geom);
        cmd = config_space_step(rec.q_est, rec.q_d, config.gains, geom);
      } else {
        rec.t_d = spec.task_setpoints[k];
        const TaskStepResult step = task_controller.step(TaskTarget{rec.t_d}, rec.q_est, geom);
        rec.q_d = step.q_desired ? *step.q_desired : rec.q_est;
        cmd = step.command;
      }
      cmd = clamp_entries(supervise_tension(cmd, sample.tensions, config.gains),
                          config.gains.max_delta);
      rec.commands = cmd.deltas;
      plant.command(cmd);
      log.records.push_back(std::move(rec));
    }
  }
  return log;
}

TrialSet run_trials(const TrajectorySpec& spec, const HarnessConfig& config) {
  std::vector<std::future<RunLog>> futures;
  for (std::uint64_t seed : config.seeds) {
    futures.push_back(std::async(std::launch::async, [&spec, &config, seed] {
      return run_trajectory(spec, seed, config, config.disturbances);
    }));
  }
  TrialSet out;
  for (auto& f : futures) {
    out.logs.push_back(f.get());
    out.reports.push_back(compute_rmse(out.logs.back(), spec, config.gains.tick_period));
  }
  out.combined = combine_trials(out.reports);
  return out;
}

Eigen::VectorXd configuration_deviation_deg(const RunRecord& record) {
  const Eigen::Index n = record.q_d.segment_count();
  Eigen::VectorXd dev(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dev(2 * i) = record.q_d.theta(i) < kGaugeTheta
                     ? 0.0
                     : std::abs(rad2deg(wrap_shortest(record.q_true.phi(i) - record.q_d.phi(i))));
    dev(2 * i + 1) = std::abs(rad2deg(record.q_true.theta(i) - record.q_d.theta(i)));
  }
  return dev;
}

Eigen::VectorXd bend_deviation_deg(const RunRecord& record) {
  const Eigen::Index n = record.q_d.segment_count();
  Eigen::VectorXd dev(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto bend = [i](const Configurationd& q) -> Eigen::Vector2d {
      return Eigen::Vector2d(std::cos(q.phi(i)), std::sin(q.phi(i))) * q.theta(i);
    };
    dev(i) = rad2deg((bend(record.q_true) - bend(record.q_d)).norm());
  }
  return dev;
}

long contraction_ticks(double gamma, double follow, double initial, double threshold) {
  // Offset applied to the sensed shape at tick 0; actuator state starts
  // settled at zero.
  double command = 0.0, shape = 0.0;
  long last_above = 0;
  constexpr long kHorizon = 10000;
  for (long t = 0; t < kHorizon; ++t) {
    const double error = shape + initial;
    if (std::abs(error) >= threshold) last_above = t + 1;
    command -= gamma * error;
    shape += follow * (command - shape);
  }
  return last_above;
}

long recovery_tick_bound(const HarnessConfig& config, double initial_deg,
                         double threshold_deg) {
  const double lag = config.plant.lag_constant;
  const double follow = lag > 0.0 ? 1.0 - std::exp(-config.gains.tick_period / lag) : 1.0;
  return 2 * contraction_ticks(config.gains.gamma, follow, initial_deg, threshold_deg) + 2;
}

std::vector<DisturbanceSpec> disturbance_schedule(const HarnessConfig& config,
                                                  std::uint64_t seed) {
  const double dt = config.gains.tick_period;
  const auto& suite = config.suite;
  std::vector<DisturbanceSpec> out;
  long t = ticks_for(suite.settle, dt);
  for (double mass : suite.tip_masses) {
    DisturbanceSpec d;
    d.kind = DisturbanceKind::kTipLoad;
    d.magnitude = mass;
    d.start_tick = t;
    d.end_tick = t + ticks_for(suite.load_hold, dt);
    d.ramp_ticks = static_cast<int>(ticks_for(suite.load_ramp, dt));
    out.push_back(d);
    t = d.end_tick + ticks_for(suite.settle, dt);
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> segment(0, static_cast<int>(config.geometry.size()) - 1);
  std::uniform_real_distribution<double> direction(-kPi<double>, kPi<double>);
  for (int p = 0; p < suite.point_loads; ++p) {
    DisturbanceSpec d;
    d.kind = DisturbanceKind::kPointLoad;
    d.magnitude = deg2rad(suite.point_load_deg);
    d.segment_index = segment(rng);
    d.direction = direction(rng);
    d.start_tick = t;
    d.end_tick = t + ticks_for(suite.point_load_hold, dt);
    out.push_back(d);
    t = d.end_tick + ticks_for(suite.point_load_gap, dt);
  }
  return out;
}

double disturbance_suite_duration(const HarnessConfig& config) {
  const auto& s = config.suite;
  return s.settle + static_cast<double>(s.tip_masses.size()) * (s.load_hold + s.settle) +
         s.point_loads * (s.point_load_hold + s.point_load_gap);
}

DisturbanceSuiteResult run_disturbance_suite(const HarnessConfig& config,
                                             std::uint64_t seed) {
  DisturbanceSuiteResult result;
  result.trajectory.mode = TrajectoryMode::kConfigSpace;
  result.trajectory.label = "disturbance_suite";
  result.trajectory.config_setpoints = {disturbance_setpoint()};
  result.trajectory.dwell = disturbance_suite_duration(config);
  result.trajectory.steady_window = 5.0;

  // The suite starts settled on the held set-point.
  HarnessConfig held = config;
  held.initial = disturbance_setpoint();

  const auto schedule = disturbance_schedule(config, seed);
  result.log = run_trajectory(result.trajectory, seed, held, schedule);
  result.report = compute_rmse(result.log, result.trajectory, config.gains.tick_period);

  const double threshold = config.suite.recovery_threshold_deg;
  result.recovery_tick_bound =
      recovery_tick_bound(config, config.suite.point_load_deg, threshold);

  const auto& recs = result.log.records;
  const long window = ticks_for(5.0, config.gains.tick_period);
  // Point loads push the bend vector, so they are judged in that metric;
  // tip loads on every configuration variable.
  std::vector<double> var_dev(recs.size()), bend_dev(recs.size());
  for (std::size_t t = 0; t < recs.size(); ++t) {
    var_dev[t] = configuration_deviation_deg(recs[t]).maxCoeff();
    bend_dev[t] = bend_deviation_deg(recs[t]).maxCoeff();
  }
  for (std::size_t e = 0; e < schedule.size(); ++e) {
    const auto& d = schedule[e];
    const auto& dev = d.kind == DisturbanceKind::kPointLoad ? bend_dev : var_dev;
    DisturbanceEvent ev;
    ev.spec = d;
    long peak_tick = d.start_tick;
    for (long t = d.start_tick; t < d.end_tick; ++t) {
      if (dev[t] > ev.max_deviation_deg) {
        ev.max_deviation_deg = dev[t];
        peak_tick = t;
      }
    }
    for (long t = peak_tick; t < d.end_tick; ++t) {
      if (dev[t] < threshold) {
        ev.onset_recovery_ticks = t - d.start_tick;
        break;
      }
    }
    const long next = e + 1 < schedule.size() ? schedule[e + 1].start_tick
                                              : static_cast<long>(recs.size());
    for (long t = d.end_tick; t < next; ++t) {
      if (dev[t] < threshold) {
        ev.release_recovery_ticks = t - d.end_tick;
        break;
      }
    }
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(2 * result.log.segments);
    const long from = std::max(d.end_tick, next - window);
    for (long t = from; t < next; ++t) sq += configuration_deviation_deg(recs[t]).array().square().matrix();
    ev.settled_rms_deg = std::sqrt(sq.maxCoeff() / static_cast<double>(next - from));
    result.events.push_back(ev);
  }
  return result;
}

SlackScenarioResult run_slack_scenario(const HarnessConfig& config,
                                       const SlackScenario& scenario,
                                       std::uint64_t seed) {
  validate(config);
  const std::span<const SegmentGeometry> geom = config.geometry;
  const auto n = static_cast<int>(config.geometry.size());
  if (scenario.segment < 0 || scenario.segment >= n) {
    throw InvalidSegment(scenario.segment, n);
  }
  const int tendons = tendons_per_segment(geom);
  if (scenario.tendon < 0 || scenario.tendon >= tendons) {
    throw ConfigError("slack tendon index out of range");
  }
  ControllerGains gains = config.gains;
  gains.tau_min = scenario.tau_min;

  SimulatedPlant plant(config.geometry, config.plant, resolve_compliance(config),
                       config.initial, config.noise_sigma, seed);
  plant.mutable_state().payout(scenario.segment, scenario.tendon) += scenario.excess_payout;
  const auto slack_tension = [&] {
    return tendon_tensions(plant.state(), geom, plant.params())
        .tensions(scenario.segment, scenario.tendon);
  };

  SlackScenarioResult result;
  result.tau_min = gains.tau_min;
  result.tension.push_back(slack_tension());
  if (result.tension.front() >= gains.tau_min) result.recovery_ticks = 0;
  for (long t = 1; t <= scenario.ticks; ++t) {
    const SensorSample sample = plant.read();
    const Configurationd q_est = estimate_configuration(sample.frames);
    const TendonCommand cmd = config_space_step(q_est, config.initial, gains, geom);
    const TendonCommand supervised = supervise_tension(cmd, sample.tensions, gains);
    Eigen::MatrixXd changed = (supervised.deltas - cmd.deltas).cwiseAbs();
    changed(scenario.segment, scenario.tendon) = 0.0;
    if (changed.maxCoeff() > 0.0) result.others_untouched = false;
    plant.command(clamp_entries(supervised, gains.max_delta));
    result.tension.push_back(slack_tension());
    if (result.recovery_ticks < 0 && result.tension.back() >= gains.tau_min) {
      result.recovery_ticks = t;
    }
  }
  return result;
}

}  // namespace tdcm::harness

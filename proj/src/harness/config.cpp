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

#include "tdcm/harness/config.hpp"

#include <fstream>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"

namespace tdcm::harness {
namespace {

using nlohmann::json;

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json configuration_to_json(const Configurationd& q) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    arr.push_back({rad2deg(q.phi(i)), rad2deg(q.theta(i))});
  }
  return arr;
}

Configurationd configuration_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("configuration must be a list of [phi_deg, theta_deg]");
  Configurationd q(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& seg = j[i];
    if (!seg.is_array() || seg.size() != 2) {
      throw ConfigError("each segment must be [phi_deg, theta_deg]");
    }
    q.set_segment(static_cast<Eigen::Index>(i),
                  canonicalize(SegmentConfigd{deg2rad(seg[0].get<double>()),
                                              deg2rad(seg[1].get<double>())}));
  }
  return q;
}

json disturbance_to_json(const DisturbanceSpec& d) {
  return {{"kind", to_string(d.kind)},       {"magnitude", d.magnitude},
          {"segment", d.segment_index},      {"direction_deg", rad2deg(d.direction)},
          {"start_tick", d.start_tick},      {"end_tick", d.end_tick},
          {"ramp_ticks", d.ramp_ticks}};
}

DisturbanceSpec disturbance_from_json(const json& j) {
  DisturbanceSpec d;
  try {
    d.kind = disturbance_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  read_opt(j, "magnitude", d.magnitude);
  read_opt(j, "segment", d.segment_index);
  if (j.contains("direction_deg")) d.direction = deg2rad(j.at("direction_deg").get<double>());
  read_opt(j, "start_tick", d.start_tick);
  read_opt(j, "end_tick", d.end_tick);
  read_opt(j, "ramp_ticks", d.ramp_ticks);
  return d;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

void validate(const HarnessConfig& config) {
  try {
    if (config.geometry.empty()) throw ConfigError("geometry has no segments");
    tendons_per_segment(config.geometry);
    validate(config.gains);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.plant.tick_period != config.gains.tick_period) {
    throw ConfigError("plant and controller tick periods differ");
  }
  if (!(config.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");
  if (config.initial.segment_count() != static_cast<Eigen::Index>(config.geometry.size())) {
    throw ConfigError("initial configuration does not match the geometry");
  }
  if (config.seeds.empty()) throw ConfigError("at least one seed is required");
  if (config.ik.tol_pos <= 0.0 || config.ik.max_iter < 0) {
    throw ConfigError("ik tolerance must be positive and max_iter non-negative");
  }
  for (const auto& d : config.disturbances) {
    try {
      validate(d);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (config.compliance.deflection_gain &&
      config.compliance.deflection_gain->size() != config.geometry.size()) {
    throw ConfigError("deflection_gain needs one entry per segment");
  }
}

ComplianceModel resolve_compliance(const HarnessConfig& config) {
  if (config.compliance.deflection_gain) return {*config.compliance.deflection_gain};
  if (config.geometry.size() != 3) {
    // The calibration posture is defined for the three-segment arm only.
    return {std::vector<double>(config.geometry.size(), 0.0)};
  }
  return calibrate_compliance(disturbance_setpoint(), config.compliance.mass,
                              deg2rad(config.compliance.deflection_deg),
                              config.geometry);
}

TrajectorySpec config_trajectory(const HarnessConfig& config) {
  return config.config_trajectory ? *config.config_trajectory : table_posture_trajectory();
}

TrajectorySpec task_trajectory(const HarnessConfig& config) {
  return config.task_trajectory ? *config.task_trajectory
                                : reconstructed_task_trajectory(config.geometry);
}

TrajectorySpec trajectory_from_json(const json& j) {
  TrajectorySpec spec;
  try {
    spec.mode = trajectory_mode_from_string(j.value("mode", std::string("config_space")));
    read_opt(j, "dwell", spec.dwell);
    read_opt(j, "steady_window", spec.steady_window);
    read_opt(j, "label", spec.label);
    for (const auto& sp : j.at("setpoints")) {
      if (spec.mode == TrajectoryMode::kConfigSpace) {
        spec.config_setpoints.push_back(configuration_from_json(sp));
      } else {
        if (!sp.is_array() || sp.size() != 3) throw ConfigError("task set-point must be [x, y, z]");
        spec.task_setpoints.emplace_back(sp[0].get<double>(), sp[1].get<double>(),
                                         sp[2].get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed trajectory: ") + e.what());
  }
  return spec;
}

json trajectory_to_json(const TrajectorySpec& spec) {
  json sp = json::array();
  if (spec.mode == TrajectoryMode::kConfigSpace) {
    for (const auto& q : spec.config_setpoints) sp.push_back(configuration_to_json(q));
  } else {
    for (const auto& t : spec.task_setpoints) sp.push_back({t.x(), t.y(), t.z()});
  }
  return {{"mode", to_string(spec.mode)}, {"dwell", spec.dwell},
          {"steady_window", spec.steady_window}, {"label", spec.label},
          {"setpoints", sp}};
}

HarnessConfig config_from_json(const json& j) {
  HarnessConfig c;
  try {
    if (j.contains("geometry")) {
      c.geometry.clear();
      for (const auto& g : j.at("geometry")) {
        SegmentGeometry s;
        read_opt(g, "length", s.length);
        read_opt(g, "tendon_radius", s.tendon_radius);
        read_opt(g, "tendon_count", s.tendon_count);
        c.geometry.push_back(s);
      }
      c.initial = Configurationd(static_cast<Eigen::Index>(c.geometry.size()));
    }
    if (j.contains("gains")) {
      const auto& g = j.at("gains");
      read_opt(g, "gamma", c.gains.gamma);
      read_opt(g, "tau_min", c.gains.tau_min);
      read_opt(g, "alpha", c.gains.alpha);
      read_opt(g, "tick_period", c.gains.tick_period);
      read_opt(g, "max_delta", c.gains.max_delta);
    }
    c.plant.tick_period = c.gains.tick_period;
    if (j.contains("ik")) {
      const auto& g = j.at("ik");
      read_opt(g, "tol_pos", c.ik.tol_pos);
      read_opt(g, "max_iter", c.ik.max_iter);
      read_opt(g, "lambda0", c.ik.lambda0);
      read_opt(g, "max_backoff", c.ik.max_backoff);
      read_opt(g, "fd_step", c.ik.fd_step);
      if (g.contains("theta_max_deg")) c.ik.theta_max = deg2rad(g.at("theta_max_deg").get<double>());
    }
    if (j.contains("plant")) {
      const auto& g = j.at("plant");
      read_opt(g, "lag_constant", c.plant.lag_constant);
      read_opt(g, "tendon_stiffness", c.plant.tendon_stiffness);
      read_opt(g, "rest_tension", c.plant.rest_tension);
      if (g.contains("theta_max_deg")) c.plant.theta_max = deg2rad(g.at("theta_max_deg").get<double>());
    }
    read_opt(j, "noise_sigma", c.noise_sigma);
    if (j.contains("compliance")) {
      const auto& g = j.at("compliance");
      read_opt(g, "mass", c.compliance.mass);
      read_opt(g, "deflection_deg", c.compliance.deflection_deg);
      if (g.contains("deflection_gain") && !g.at("deflection_gain").is_null()) {
        c.compliance.deflection_gain = g.at("deflection_gain").get<std::vector<double>>();
      }
    }
    if (j.contains("initial")) c.initial = configuration_from_json(j.at("initial"));
    read_opt(j, "seeds", c.seeds);
    if (j.contains("config_trajectory")) c.config_trajectory = trajectory_from_json(j.at("config_trajectory"));
    if (j.contains("task_trajectory")) c.task_trajectory = trajectory_from_json(j.at("task_trajectory"));
    if (j.contains("disturbances")) {
      for (const auto& d : j.at("disturbances")) c.disturbances.push_back(disturbance_from_json(d));
    }
    if (j.contains("disturbance_suite")) {
      const auto& g = j.at("disturbance_suite");
      read_opt(g, "settle", c.suite.settle);
      read_opt(g, "tip_masses", c.suite.tip_masses);
      read_opt(g, "load_hold", c.suite.load_hold);
      read_opt(g, "load_ramp", c.suite.load_ramp);
      read_opt(g, "point_loads", c.suite.point_loads);
      read_opt(g, "point_load_deg", c.suite.point_load_deg);
      read_opt(g, "point_load_hold", c.suite.point_load_hold);
      read_opt(g, "point_load_gap", c.suite.point_load_gap);
      read_opt(g, "recovery_threshold_deg", c.suite.recovery_threshold_deg);
    }
    if (j.contains("thresholds")) {
      const auto& g = j.at("thresholds");
      read_opt(g, "config_rmse_deg", c.thresholds.config_rmse_deg);
      read_opt(g, "config_rmse_noiseless_deg", c.thresholds.config_rmse_noiseless_deg);
      read_opt(g, "trial_spread_deg", c.thresholds.trial_spread_deg);
      read_opt(g, "task_rmse_fraction", c.thresholds.task_rmse_fraction);
      read_opt(g, "task_rmse_noiseless", c.thresholds.task_rmse_noiseless);
      read_opt(g, "max_disturbance_deg", c.thresholds.max_disturbance_deg);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

json config_to_json(const HarnessConfig& c) {
  json geom = json::array();
  for (const auto& g : c.geometry) {
    geom.push_back({{"length", g.length}, {"tendon_radius", g.tendon_radius},
                    {"tendon_count", g.tendon_count}});
  }
  json dist = json::array();
  for (const auto& d : c.disturbances) dist.push_back(disturbance_to_json(d));
  json j = {
      {"geometry", geom},
      {"gains", {{"gamma", c.gains.gamma}, {"tau_min", c.gains.tau_min},
                 {"alpha", c.gains.alpha}, {"tick_period", c.gains.tick_period},
                 {"max_delta", c.gains.max_delta}}},
      {"ik", {{"tol_pos", c.ik.tol_pos}, {"max_iter", c.ik.max_iter},
              {"lambda0", c.ik.lambda0}, {"max_backoff", c.ik.max_backoff},
              {"fd_step", c.ik.fd_step}, {"theta_max_deg", rad2deg(c.ik.theta_max)}}},
      {"plant", {{"lag_constant", c.plant.lag_constant},
                 {"tendon_stiffness", c.plant.tendon_stiffness},
                 {"rest_tension", c.plant.rest_tension},
                 {"theta_max_deg", rad2deg(c.plant.theta_max)}}},
      {"noise_sigma", c.noise_sigma},
      {"compliance", {{"mass", c.compliance.mass},
                      {"deflection_deg", c.compliance.deflection_deg},
                      {"deflection_gain", c.compliance.deflection_gain
                                              ? json(*c.compliance.deflection_gain)
                                              : json(nullptr)}}},
      {"initial", configuration_to_json(c.initial)},
      {"seeds", c.seeds},
      {"disturbances", dist},
      {"disturbance_suite", {{"settle", c.suite.settle},
                             {"tip_masses", c.suite.tip_masses},
                             {"load_hold", c.suite.load_hold},
                             {"load_ramp", c.suite.load_ramp},
                             {"point_loads", c.suite.point_loads},
                             {"point_load_deg", c.suite.point_load_deg},
                             {"point_load_hold", c.suite.point_load_hold},
                             {"point_load_gap", c.suite.point_load_gap},
                             {"recovery_threshold_deg", c.suite.recovery_threshold_deg}}},
      {"thresholds", {{"config_rmse_deg", c.thresholds.config_rmse_deg},
                      {"config_rmse_noiseless_deg", c.thresholds.config_rmse_noiseless_deg},
                      {"trial_spread_deg", c.thresholds.trial_spread_deg},
                      {"task_rmse_fraction", c.thresholds.task_rmse_fraction},
                      {"task_rmse_noiseless", c.thresholds.task_rmse_noiseless},
                      {"max_disturbance_deg", c.thresholds.max_disturbance_deg}}},
  };
  if (c.config_trajectory) j["config_trajectory"] = trajectory_to_json(*c.config_trajectory);
  if (c.task_trajectory) j["task_trajectory"] = trajectory_to_json(*c.task_trajectory);
  return j;
}

HarnessConfig load_config(const std::string& path) {
  return config_from_json(read_json_file(path));
}

TrajectorySpec load_trajectory(const std::string& path) {
  return trajectory_from_json(read_json_file(path));
}

}  // namespace tdcm::harness

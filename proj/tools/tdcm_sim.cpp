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

// Command-line front end of the simulator and experiment harness.
//
// Exit status: 0 when every threshold of the run is met, 1 when a threshold
// is missed, 2 on usage, configuration or I/O errors.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"
#include "tdcm/harness/config.hpp"
#include "tdcm/harness/experiments.hpp"
#include "tdcm/harness/export.hpp"
#include "tdcm/harness/verdict.hpp"
#include "tdcm/kinematics.hpp"
#include "tdcm/task_space_ik.hpp"

namespace {

using namespace tdcm;
using namespace tdcm::harness;
using nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  std::string trajectory_path;
  std::string out_dir = "out";
  std::string backend = "sim";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int trials = 0;
  double noise = -1.0;
  double lag = -1.0;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

Configurationd configuration_from_degrees(const std::vector<double>& values, Eigen::Index n) {
  if (static_cast<Eigen::Index>(values.size()) != 2 * n) {
    throw ConfigError("expected " + std::to_string(2 * n) +
                      " comma-separated angles (phi, theta per segment, degrees)");
  }
  Configurationd q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q.set_segment(i, canonicalize(SegmentConfigd{deg2rad(values[2 * i]),
                                                 deg2rad(values[2 * i + 1])}));
  }
  return q;
}

json configuration_json(const Configurationd& q) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    arr.push_back({{"phi_deg", rad2deg(q.phi(i))}, {"theta_deg", rad2deg(q.theta(i))}});
  }
  return arr;
}

HarnessConfig resolve(const GlobalOptions& g) {
  if (g.backend != "sim") throw ConfigError("only the 'sim' backend is available");
  HarnessConfig c = g.config_path.empty() ? HarnessConfig{} : load_config(g.config_path);
  const int trials = g.trials > 0 ? g.trials : static_cast<int>(c.seeds.size());
  if (g.seed_given || g.trials > 0) {
    const std::uint64_t base = g.seed_given ? g.seed : c.seeds.front();
    c.seeds.clear();
    for (int k = 0; k < trials; ++k) c.seeds.push_back(base + static_cast<std::uint64_t>(k));
  }
  if (g.noise >= 0.0) c.noise_sigma = g.noise;
  if (g.lag >= 0.0) c.plant.lag_constant = g.lag;
  if (!g.trajectory_path.empty()) {
    TrajectorySpec t = load_trajectory(g.trajectory_path);
    (t.mode == TrajectoryMode::kConfigSpace ? c.config_trajectory : c.task_trajectory) = t;
  }
  validate(c);
  return c;
}

int report(const Verdict& v) {
  for (const auto& line : v.lines) std::cout << line << '\n';
  std::cout << (v.pass ? "RESULT PASS" : "RESULT FAIL") << std::endl;
  return v.pass ? 0 : 1;
}

void print_rmse(const RmseReport& r) {
  std::printf("%-9s %-9s %12s %12s\n", "setpoint", "variable", "rmse", "spread");
  for (const auto& e : r.entries) {
    std::printf("%-9d %-9s %12.5f %12.5f %s%s\n", e.setpoint + 1, e.variable.c_str(), e.rmse,
                e.spread, e.unit.c_str(), e.gauge ? " (gauge)" : "");
  }
}

void write_trial_logs(const TrialSet& trials, const std::string& dir) {
  for (std::size_t k = 1; k < trials.logs.size(); ++k) {
    write_runlog_csv(trials.logs[k], dir + "/runlog_trial" + std::to_string(k + 1) + ".csv");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tendon-driven compliant manipulator simulator"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON harness configuration")->check(CLI::ExistingFile);
  app.add_option("--trajectory", g.trajectory_path, "JSON trajectory overriding the default")
      ->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--seed", g.seed, "seed of the first trial")
      ->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--trials", g.trials, "number of trials (consecutive seeds)")
      ->check(CLI::PositiveNumber);
  app.add_option("--backend", g.backend, "driver backend")->check(CLI::IsMember({"sim"}));
  app.add_option("--noise", g.noise, "override quaternion noise sigma");
  app.add_option("--lag", g.lag, "override actuator lag constant [s]; 0 disables");

  std::string q_text, target_text, q0_text, log_path, report_path, figures = "config";

  auto* fk = app.add_subcommand("fk", "forward kinematics of a configuration");
  fk->add_option("--q", q_text, "phi1,theta1,... in degrees")->required();
  auto* ik = app.add_subcommand("ik", "inverse kinematics for a tip position");
  ik->add_option("--target", target_text, "x,y,z in metres")->required();
  ik->add_option("--q0", q0_text, "warm start, phi1,theta1,... in degrees");
  auto* track_config = app.add_subcommand("track-config", "configuration-space tracking");
  auto* track_task = app.add_subcommand("track-task", "task-space tracking");
  auto* disturb = app.add_subcommand("disturb", "disturbance rejection suite");
  SlackScenario slack_opts;
  auto* slack = app.add_subcommand("slack", "slack-tendon supervision scenario");
  slack->add_option("--segment", slack_opts.segment, "slack segment, 1-based")
      ->transform([](std::string v) { return std::to_string(std::stoi(v) - 1); });
  slack->add_option("--tendon", slack_opts.tendon, "slack tendon, 1-based")
      ->transform([](std::string v) { return std::to_string(std::stoi(v) - 1); });
  slack->add_option("--excess", slack_opts.excess_payout, "extra payout [m]");
  slack->add_option("--tau-min", slack_opts.tau_min, "supervision threshold [N]");
  slack->add_option("--ticks", slack_opts.ticks, "ticks to run")->check(CLI::PositiveNumber);
  auto* rmse = app.add_subcommand("rmse", "steady-state RMSE of a logged run");
  rmse->add_option("--log", log_path, "runlog.csv")->required()->check(CLI::ExistingFile);
  rmse->add_option("--mode", figures, "config or task")->check(CLI::IsMember({"config", "task"}));
  auto* exp = app.add_subcommand("export", "plot data files from a logged run");
  exp->add_option("--log", log_path, "runlog.csv")->required()->check(CLI::ExistingFile);
  exp->add_option("--report", report_path, "rmse.json (recomputed when absent)");
  exp->add_option("--figures", figures, "config, task or disturbance")
      ->check(CLI::IsMember({"config", "task", "disturbance"}));
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const HarnessConfig config = resolve(g);
    const std::span<const SegmentGeometry> geom = config.geometry;
    const auto n = static_cast<Eigen::Index>(config.geometry.size());

    if (fk->parsed()) {
      const Configurationd q = configuration_from_degrees(parse_list(q_text), n);
      const auto pose = forward_kinematics(q, geom);
      json frames = json::array();
      for (const auto& f : pose.frames) {
        const Eigen::Vector3d p = f.translation();
        const Eigen::Quaterniond o(f.linear());
        frames.push_back({{"position", {p.x(), p.y(), p.z()}},
                          {"orientation_xyzw", {o.x(), o.y(), o.z(), o.w()}}});
      }
      const Eigen::Vector3d tip = pose.tip.translation();
      std::cout << json{{"configuration", configuration_json(q)},
                        {"tip", {tip.x(), tip.y(), tip.z()}},
                        {"frames", frames}}
                       .dump(2)
                << std::endl;
      return 0;
    }
    if (ik->parsed()) {
      const auto t = parse_list(target_text);
      if (t.size() != 3) throw ConfigError("--target needs x,y,z");
      const TaskTarget target{Eigen::Vector3d(t[0], t[1], t[2])};
      const Configurationd q0 =
          q0_text.empty() ? config.initial : configuration_from_degrees(parse_list(q0_text), n);
      if (!target.within_reach(geom)) std::cerr << "warning: target lies outside the reach sphere\n";
      const IkSolution sol = solve_ik(target, q0, geom, config.ik);
      std::cout << json{{"configuration", configuration_json(sol.q_star)},
                        {"residual", sol.residual},
                        {"iterations", sol.iterations},
                        {"converged", sol.converged}}
                       .dump(2)
                << std::endl;
      return sol.converged ? 0 : 1;
    }
    if (track_config->parsed() || track_task->parsed()) {
      const bool config_mode = track_config->parsed();
      const TrajectorySpec spec = config_mode ? config_trajectory(config) : task_trajectory(config);
      const TrialSet trials = run_trials(spec, config);
      export_results(trials.logs.front(), trials.combined, g.out_dir,
                     config_mode ? FigureSet::kConfigTracking : FigureSet::kTaskTracking);
      write_trial_logs(trials, g.out_dir);
      print_rmse(trials.combined);
      return report(config_mode ? judge_config_tracking(trials, config)
                                : judge_task_tracking(trials, config));
    }
    if (disturb->parsed()) {
      Verdict all;
      for (std::uint64_t seed : config.seeds) {
        const DisturbanceSuiteResult result = run_disturbance_suite(config, seed);
        if (seed == config.seeds.front()) {
          export_results(result.log, result.report, g.out_dir, FigureSet::kDisturbance);
        }
        const Verdict v = judge_disturbance(result, config);
        for (const auto& line : v.lines) all.lines.push_back("seed " + std::to_string(seed) + ": " + line);
        all.pass = all.pass && v.pass;
      }
      return report(all);
    }
    if (slack->parsed()) {
      const SlackScenarioResult r = run_slack_scenario(config, slack_opts, config.seeds.front());
      for (std::size_t t = 0; t < r.tension.size(); ++t) {
        std::printf("tick %2zu  tension %.4f N\n", t, r.tension[t]);
      }
      return report(judge_slack(r, slack_opts.ticks));
    }
    if (rmse->parsed() || exp->parsed()) {
      const RunLog log = read_runlog_csv(log_path);
      const bool task = figures == "task";
      const TrajectorySpec spec = task ? task_trajectory(config) : config_trajectory(config);
      RmseReport r;
      if (!report_path.empty()) {
        r = read_report_json(report_path);
      } else if (figures != "disturbance") {
        r = compute_rmse(log, spec, config.gains.tick_period);
      }
      if (rmse->parsed()) {
        write_report_json(r, g.out_dir + "/rmse.json");
        print_rmse(r);
        return 0;
      }
      const FigureSet set = figures == "task"          ? FigureSet::kTaskTracking
                            : figures == "disturbance" ? FigureSet::kDisturbance
                                                       : FigureSet::kConfigTracking;
      for (const auto& path : export_results(log, r, g.out_dir, set)) std::cout << path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}

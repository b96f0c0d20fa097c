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

#include "tdcm/harness/rmse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"
#include "tdcm/state_estimation.hpp"

namespace tdcm::harness {

const RmseEntry* RmseReport::find(int setpoint, const std::string& variable) const {
  for (const auto& e : entries) {
    if (e.setpoint == setpoint && e.variable == variable) return &e;
  }
  return nullptr;
}

double RmseReport::max_rmse() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.rmse);
  return m;
}

double RmseReport::max_spread() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.spread);
  return m;
}

RmseReport compute_rmse(const RunLog& log, const TrajectorySpec& spec,
                        double tick_period) {
  RmseReport report;
  report.mode = spec.mode;
  report.dwell = spec.dwell;
  report.steady_window = spec.steady_window;
  const long dwell = ticks_for(spec.dwell, tick_period);
  const long steady = ticks_for(spec.steady_window, tick_period);
  const int n = log.segments;

  // Records are usually dense from tick 0; fall back to a search otherwise.
  const auto record_at = [&](long tick) -> const RunRecord* {
    if (tick < static_cast<long>(log.records.size()) && log.records[tick].tick == tick) {
      return &log.records[tick];
    }
    auto it = std::lower_bound(log.records.begin(), log.records.end(), tick,
                               [](const RunRecord& r, long t) { return r.tick < t; });
    return it != log.records.end() && it->tick == tick ? &*it : nullptr;
  };

  for (std::size_t k = 0; k < spec.setpoint_count(); ++k) {
    const long end = static_cast<long>(k + 1) * dwell;
    const long begin = end - steady;
    const int vars = spec.mode == TrajectoryMode::kConfigSpace ? 2 * n : 4;
    std::vector<double> sq(vars, 0.0);
    std::vector<bool> gauge(vars, false);
    for (long t = begin; t < end; ++t) {
      const RunRecord* r = record_at(t);
      if (!r || r->setpoint != static_cast<int>(k)) {
        throw IncompleteLog("steady window of set-point " + std::to_string(k + 1) +
                            " is missing tick " + std::to_string(t));
      }
      if (spec.mode == TrajectoryMode::kConfigSpace) {
        for (int i = 0; i < n; ++i) {
          double e_phi = rad2deg(wrap_shortest(r->q_true.phi(i) - r->q_d.phi(i)));
          if (r->q_d.theta(i) < kGaugeTheta) {
            e_phi = 0.0;
            gauge[2 * i] = true;
          }
          const double e_theta = rad2deg(r->q_true.theta(i) - r->q_d.theta(i));
          sq[2 * i] += e_phi * e_phi;
          sq[2 * i + 1] += e_theta * e_theta;
        }
      } else {
        const Eigen::Vector3d e = r->t_true - r->t_d;
        for (int a = 0; a < 3; ++a) sq[a] += e(a) * e(a);
        sq[3] += e.squaredNorm();
      }
    }
    for (int v = 0; v < vars; ++v) {
      RmseEntry entry;
      entry.setpoint = static_cast<int>(k);
      if (spec.mode == TrajectoryMode::kConfigSpace) {
        entry.variable = (v % 2 == 0 ? "phi" : "theta") + std::to_string(v / 2 + 1);
        entry.unit = "deg";
      } else {
        static const char* kAxes[] = {"x", "y", "z", "position"};
        entry.variable = kAxes[v];
        entry.unit = "m";
      }
      entry.rmse = std::sqrt(sq[v] / static_cast<double>(steady));
      entry.per_trial = {entry.rmse};
      entry.gauge = gauge[v];
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

RmseReport combine_trials(std::span<const RmseReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no trials to combine");
  RmseReport out = reports.front();
  out.trials = 0;
  for (const auto& r : reports) out.trials += r.trials;
  for (std::size_t e = 0; e < out.entries.size(); ++e) {
    auto& entry = out.entries[e];
    entry.per_trial.clear();
    for (const auto& r : reports) {
      if (r.entries.size() != out.entries.size() || r.entries[e].setpoint != entry.setpoint ||
          r.entries[e].variable != entry.variable) {
        throw std::invalid_argument("trial reports describe different entries");
      }
      entry.per_trial.insert(entry.per_trial.end(), r.entries[e].per_trial.begin(),
                             r.entries[e].per_trial.end());
      entry.gauge = entry.gauge || r.entries[e].gauge;
    }
    const double count = static_cast<double>(entry.per_trial.size());
    double mean = 0.0;
    for (double v : entry.per_trial) mean += v;
    mean /= count;
    double var = 0.0;
    for (double v : entry.per_trial) var += (v - mean) * (v - mean);
    entry.rmse = mean;
    entry.spread = count > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
  }
  return out;
}

nlohmann::json report_to_json(const RmseReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"setpoint", e.setpoint}, {"variable", e.variable},
                       {"unit", e.unit}, {"rmse", e.rmse}, {"spread", e.spread},
                       {"per_trial", e.per_trial}, {"gauge", e.gauge}});
  }
  return {{"mode", to_string(report.mode)}, {"dwell", report.dwell},
          {"steady_window", report.steady_window}, {"trials", report.trials},
          {"entries", entries}};
}

RmseReport report_from_json(const nlohmann::json& j) {
  RmseReport r;
  try {
    r.mode = trajectory_mode_from_string(j.at("mode").get<std::string>());
    j.at("dwell").get_to(r.dwell);
    j.at("steady_window").get_to(r.steady_window);
    j.at("trials").get_to(r.trials);
    for (const auto& e : j.at("entries")) {
      RmseEntry entry;
      e.at("setpoint").get_to(entry.setpoint);
      e.at("variable").get_to(entry.variable);
      e.at("unit").get_to(entry.unit);
      e.at("rmse").get_to(entry.rmse);
      e.at("spread").get_to(entry.spread);
      e.at("per_trial").get_to(entry.per_trial);
      e.at("gauge").get_to(entry.gauge);
      r.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed RMSE report: ") + e.what());
  }
  return r;
}

void write_report_json(const RmseReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << report_to_json(report).dump(2) << '\n';
  if (!out) throw IoError(path, "write failed");
}

RmseReport read_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  try {
    return report_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace tdcm::harness

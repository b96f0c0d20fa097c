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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "tdcm/angles.hpp"
#include "tdcm/harness/config.hpp"
#include "tdcm/harness/experiments.hpp"
#include "tdcm/harness/run_log.hpp"
#include "tdcm/harness/trajectory.hpp"
#include "tdcm/harness/verdict.hpp"
#include "tdcm/kinematics.hpp"
#include "tdcm/state_estimation.hpp"
#include "tdcm/task_space_ik.hpp"
#include "tdcm/tendon_actuation.hpp"
#include "test_util.hpp"

namespace {

using namespace tdcm;
using namespace tdcm::harness;
using tdcm::testing::random_configuration;

constexpr double kPiD = kPi<double>;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // [s]; 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

Outcome from_verdict(const Verdict& v, Outcome out = {}) {
  for (const auto& line : v.lines) {
    if (line.rfind("FAIL", 0) == 0) {
      out.pass = false;
      out.detail += (out.detail.empty() ? "" : "; ") + line;
    }
  }
  return out;
}

Outcome kinematics_validity() {
  const auto geom = tdcm::testing::default_chain();
  std::mt19937_64 rng(101);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto q = random_configuration(rng, 1, -kPiD, kPiD);
    const Eigen::Matrix3d r = segment_rotation(q.segment(0));
    worst_orth = std::max(worst_orth, (r.transpose() * r - Eigen::Matrix3d::Identity()).norm());
    worst_det = std::max(worst_det, std::abs(r.determinant() - 1.0));
  }
  // Approach the straight arm from random directions: the tip must settle
  // on the straight pose, and nothing may jump across the series cut-off.
  double worst_gap = 0.0;
  const Eigen::Isometry3d straight = forward_kinematics(Configurationd(3), geom).tip;
  for (int k = 0; k < 1000; ++k) {
    for (double scale : {1e-7, 1e-9, 1e-11}) {
      auto q = random_configuration(rng, 3, 0.0, 1.0);
      for (Eigen::Index i = 0; i < 3; ++i) q.theta(i) *= scale;
      const Eigen::Isometry3d tip = forward_kinematics(q, geom).tip;
      worst_gap = std::max({worst_gap, (tip.translation() - straight.translation()).norm(),
                            (tip.linear() - straight.linear()).norm()});
    }
    std::uniform_real_distribution<double> plane(-kPiD, kPiD);
    const double phi = plane(rng);
    const Eigen::Vector3d below =
        segment_translation(SegmentConfigd{phi, kSingularTheta * (1 - 1e-9)}, 1.0 / 3.0);
    const Eigen::Vector3d above =
        segment_translation(SegmentConfigd{phi, kSingularTheta * (1 + 1e-9)}, 1.0 / 3.0);
    worst_gap = std::max(worst_gap, (below - above).norm());
  }
  Outcome out;
  out.pass = worst_orth < 1e-12 && worst_det < 1e-12 && worst_gap < 1e-6;
  out.detail = fmt("orthogonality %.1e, det %.1e, straight-arm gap %.1e", worst_orth, worst_det,
                   worst_gap);
  return out;
}

Outcome estimator_round_trip() {
  double worst = 0.0;
  long samples = 0;
  for (int a = 0; a < 360; ++a) {
    // Right-closed interval: -pi excluded, pi included.
    const double phi = -kPiD + (a + 1) * (2 * kPiD / 360);
    for (int t = 1; t <= 179; ++t) {
      const double theta = deg2rad(static_cast<double>(t));
      const Eigen::Quaterniond qt(segment_rotation(SegmentConfigd{phi, theta}));
      const auto c = arc_parameters_from_quaternion(qt);
      worst = std::max({worst, std::abs(wrap_shortest(c.phi - phi)), std::abs(c.theta - theta)});
      ++samples;
    }
  }
  Outcome out;
  out.pass = worst < 1e-9;
  out.detail = fmt("%.0f grid points, worst error %.1e rad", static_cast<double>(samples), worst);
  return out;
}

Outcome jacobian_correctness() {
  const auto geom = tdcm::testing::default_chain();
  std::mt19937_64 rng(103);
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto q = random_configuration(rng, 3, deg2rad(1.0), deg2rad(120.0));
    const Eigen::MatrixXd analytic = tendon_jacobian(q, geom).full;
    Eigen::MatrixXd fd(analytic.rows(), analytic.cols());
    for (Eigen::Index c = 0; c < fd.cols(); ++c) {
      Configurationd plus = q, minus = q;
      plus.stacked()(c) += h;
      minus.stacked()(c) -= h;
      const Eigen::MatrixXd lp = tendon_lengths(plus, geom).lengths;
      const Eigen::MatrixXd lm = tendon_lengths(minus, geom).lengths;
      for (Eigen::Index r = 0; r < fd.rows(); ++r) {
        fd(r, c) = (lp(r / 4, r % 4) - lm(r / 4, r % 4)) / (2 * h);
      }
    }
    worst = std::max(worst, (analytic - fd).norm() / fd.norm());
  }
  Outcome out;
  out.pass = worst < 1e-5;
  out.detail = fmt("1000 configurations, worst relative error %.1e", worst);
  return out;
}

Outcome config_tracking() {
  HarnessConfig config;
  const TrajectorySpec spec = table_posture_trajectory();
  const TrialSet noisy = run_trials(spec, config);
  Outcome out = from_verdict(judge_config_tracking(noisy, config));

  HarnessConfig quiet = config;
  quiet.noise_sigma = 0.0;
  quiet.seeds = {config.seeds.front()};
  const TrialSet clean = run_trials(spec, quiet);
  const double clean_max = clean.combined.max_rmse();
  if (!(clean_max < config.thresholds.config_rmse_noiseless_deg)) {
    out.pass = false;
    out.detail += (out.detail.empty() ? "" : "; ") +
                  fmt("FAIL noiseless RMSE %.3f deg >= %.3f deg", clean_max,
                      config.thresholds.config_rmse_noiseless_deg);
  }
  out.detail = fmt("max RMSE %.3f deg, spread %.3f deg, noiseless %.3f deg",
                   noisy.combined.max_rmse(), noisy.combined.max_spread(), clean_max) +
               (out.detail.empty() ? "" : " | " + out.detail);
  return out;
}

Outcome task_tracking() {
  HarnessConfig config;
  const TrajectorySpec spec = task_trajectory(config);
  const TrialSet noisy = run_trials(spec, config);
  Outcome out = from_verdict(judge_task_tracking(noisy, config));

  HarnessConfig ideal = config;
  ideal.noise_sigma = 0.0;
  ideal.plant.lag_constant = 0.0;
  ideal.seeds = {config.seeds.front()};
  const TrialSet clean = run_trials(spec, ideal);
  out = from_verdict(judge_task_tracking(clean, ideal), out);

  const auto worst = [](const TrialSet& t) {
    double m = 0.0;
    for (const auto& e : t.combined.entries) {
      if (e.variable == "position") m = std::max(m, e.rmse);
    }
    return m;
  };
  out.detail = fmt("max position RMSE %.4f m, noise and lag off %.5f m", worst(noisy),
                   worst(clean)) +
               (out.detail.empty() ? "" : " | " + out.detail);
  return out;
}

Outcome ik_solver() {
  const auto geom = tdcm::testing::default_chain();
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> jitter(-deg2rad(5.0), deg2rad(5.0));
  int converged = 0, worst_iter = 0;
  for (int k = 0; k < 100; ++k) {
    const auto q = random_configuration(rng, 3, deg2rad(5.0), deg2rad(60.0));
    Configurationd q0 = q;
    for (Eigen::Index i = 0; i < q0.stacked().size(); ++i) q0.stacked()(i) += jitter(rng);
    const IkSolution sol = solve_ik(TaskTarget{tip_position(q, geom)}, q0.canonical(), geom);
    if (sol.converged && sol.residual < 1e-4 && sol.iterations <= 50) ++converged;
    worst_iter = std::max(worst_iter, sol.iterations);
  }
  Outcome out;
  out.pass = converged == 100;
  out.detail = fmt("%.0f/100 converged, worst %.0f iterations", converged, worst_iter);
  return out;
}

Outcome disturbance_rejection() {
  HarnessConfig config;
  Outcome out;
  double worst_tip = 0.0;
  long worst_point = 0, bound = 0;
  for (std::uint64_t seed : config.seeds) {
    const DisturbanceSuiteResult r = run_disturbance_suite(config, seed);
    out = from_verdict(judge_disturbance(r, config), out);
    bound = r.recovery_tick_bound;
    for (const auto& e : r.events) {
      if (e.spec.kind == DisturbanceKind::kTipLoad) {
        worst_tip = std::max(worst_tip, e.max_deviation_deg);
      } else {
        worst_point = std::max(worst_point, e.onset_recovery_ticks);
      }
    }
  }
  out.detail = fmt("tip load max %.2f deg, point load decay %.0f ticks (bound %.0f)", worst_tip,
                   static_cast<double>(worst_point), static_cast<double>(bound)) +
               (out.detail.empty() ? "" : " | " + out.detail);
  return out;
}

Outcome tension_supervision() {
  HarnessConfig config;
  Outcome out;
  long worst = 0;
  for (int segment = 0; segment < 3; ++segment) {
    for (int tendon = 0; tendon < 4; ++tendon) {
      SlackScenario s;
      s.segment = segment;
      s.tendon = tendon;
      const SlackScenarioResult r = run_slack_scenario(config, s, 1);
      const Outcome one = from_verdict(judge_slack(r, s.ticks));
      if (!one.pass) {
        out.pass = false;
        out.detail += (out.detail.empty() ? "" : "; ") +
                      fmt("segment %.0f tendon %.0f: ", segment + 1, tendon + 1) + one.detail;
      }
      worst = std::max(worst, r.recovery_ticks);
    }
  }
  out.detail = fmt("12 tendons, 2 mm slack, worst recovery %.0f ticks", static_cast<double>(worst)) +
               (out.detail.empty() ? "" : " | " + out.detail);
  return out;
}

Outcome determinism() {
  namespace fs = std::filesystem;
  HarnessConfig config;
  const TrajectorySpec spec = table_posture_trajectory();
  const fs::path dir = fs::temp_directory_path() / "tdcm_acceptance";
  fs::create_directories(dir);
  const auto write = [&](const std::string& name) {
    const fs::path p = dir / name;
    write_runlog_csv(run_trajectory(spec, config.seeds.front(), config), p.string());
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = write("runlog_a.csv");
  const std::string b = write("runlog_b.csv");
  Outcome out;
  out.pass = !a.empty() && a == b;
  out.detail = fmt("%.0f bytes, ", static_cast<double>(a.size())) +
               (out.pass ? "identical" : "different");
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "kinematics validity", 1.0, kinematics_validity},
      {2, "estimator round trip", 1.0, estimator_round_trip},
      {3, "jacobian correctness", 0.0, jacobian_correctness},
      {4, "configuration-space tracking", 30.0, config_tracking},
      {5, "task-space tracking", 30.0, task_tracking},
      {6, "ik solver", 0.0, ik_solver},
      {7, "disturbance rejection", 30.0, disturbance_rejection},
      {8, "tension supervision", 0.0, tension_supervision},
      {9, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      out.pass = false;
      out.detail += fmt(" | runtime over %.0f s", c.time_limit);
    }
    std::printf("%s %d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

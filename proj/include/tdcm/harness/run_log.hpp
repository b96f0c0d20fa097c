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

// Per-tick record of a closed-loop run and its CSV form.
//
// CSV layout (one header row, then one row per tick; n segments, m tendons
// per segment; angles in degrees, lengths in metres, tensions in newtons):
//
//   tick, time, setpoint,
//   phi{i}_d, theta{i}_d      for i = 1..n
//   phi{i}_est, theta{i}_est  for i = 1..n
//   phi{i}_true, theta{i}_true for i = 1..n
//   x_d, y_d, z_d, x_est, y_est, z_est, x_true, y_true, z_true,
//   tau_{i}_{j}               for i = 1..n, j = 1..m
//   dl_{i}_{j}                for i = 1..n, j = 1..m
//   disturbance               ("none" or '+'-joined labels)

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "tdcm/kinematics.hpp"

namespace tdcm::harness {

struct RunRecord {
  long tick = 0;
  double time = 0.0;  // [s]
  int setpoint = 0;
  Configurationd q_d, q_est, q_true;
  Eigen::Vector3d t_d = Eigen::Vector3d::Zero();
  Eigen::Vector3d t_est = Eigen::Vector3d::Zero();
  Eigen::Vector3d t_true = Eigen::Vector3d::Zero();
  Eigen::MatrixXd tensions;  // [N]
  Eigen::MatrixXd commands;  // [m], after supervision
  std::string disturbance = "none";
};

struct RunLog {
  int segments = 3;
  int tendons = 4;
  std::vector<RunRecord> records;
};

std::vector<std::string> runlog_columns(int segments, int tendons);

/// Throws std::logic_error if any record breaks the schema.
void write_runlog_csv(const RunLog& log, std::ostream& out);
/// Throws IoError with the path on failure.
void write_runlog_csv(const RunLog& log, const std::string& path);

/// Throws ConfigError when the header or a row does not match the schema.
RunLog read_runlog_csv(std::istream& in);
RunLog read_runlog_csv(const std::string& path);

/// Throws ConfigError if records are missing columns or ticks go backwards.
void check_schema(const RunLog& log);

}  // namespace tdcm::harness

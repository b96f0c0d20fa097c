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

#include "tdcm/harness/run_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"

namespace tdcm::harness {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("runlog: not a number '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("runlog: trailing characters in '" + s + "'");
  return v;
}

bool shaped(const Configurationd& q, int n) { return q.segment_count() == n; }

}  // namespace

std::vector<std::string> runlog_columns(int segments, int tendons) {
  std::vector<std::string> cols{"tick", "time", "setpoint"};
  for (const char* which : {"d", "est", "true"}) {
    for (int i = 1; i <= segments; ++i) {
      cols.push_back("phi" + std::to_string(i) + "_" + which);
      cols.push_back("theta" + std::to_string(i) + "_" + which);
    }
  }
  for (const char* which : {"d", "est", "true"}) {
    for (const char* axis : {"x", "y", "z"}) cols.push_back(std::string(axis) + "_" + which);
  }
  for (const char* prefix : {"tau", "dl"}) {
    for (int i = 1; i <= segments; ++i) {
      for (int j = 1; j <= tendons; ++j) {
        cols.push_back(std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(j));
      }
    }
  }
  cols.push_back("disturbance");
  return cols;
}

void check_schema(const RunLog& log) {
  long prev = -1;
  for (const auto& r : log.records) {
    if (!shaped(r.q_d, log.segments) || !shaped(r.q_est, log.segments) ||
        !shaped(r.q_true, log.segments) || r.tensions.rows() != log.segments ||
        r.tensions.cols() != log.tendons || r.commands.rows() != log.segments ||
        r.commands.cols() != log.tendons) {
      throw ConfigError("runlog record at tick " + std::to_string(r.tick) +
                        " does not match the schema");
    }
    if (r.tick <= prev) throw ConfigError("runlog ticks are not strictly increasing");
    if (r.disturbance.empty() || r.disturbance.find(',') != std::string::npos) {
      throw ConfigError("runlog disturbance label must be non-empty and comma-free");
    }
    prev = r.tick;
  }
}

void write_runlog_csv(const RunLog& log, std::ostream& out) {
  check_schema(log);
  const auto cols = runlog_columns(log.segments, log.tendons);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& r : log.records) {
    std::vector<std::string> row;
    row.reserve(cols.size());
    row.push_back(std::to_string(r.tick));
    row.push_back(fmt(r.time));
    row.push_back(std::to_string(r.setpoint));
    for (const Configurationd* q : {&r.q_d, &r.q_est, &r.q_true}) {
      for (Eigen::Index i = 0; i < q->stacked().size(); ++i) row.push_back(fmt(rad2deg(q->stacked()(i))));
    }
    for (const Eigen::Vector3d* t : {&r.t_d, &r.t_est, &r.t_true}) {
      for (int k = 0; k < 3; ++k) row.push_back(fmt((*t)(k)));
    }
    for (const Eigen::MatrixXd* m : {&r.tensions, &r.commands}) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) {
        for (Eigen::Index j = 0; j < m->cols(); ++j) row.push_back(fmt((*m)(i, j)));
      }
    }
    row.push_back(r.disturbance);
    if (row.size() != cols.size()) {
      throw std::logic_error("runlog row width does not match the header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

void write_runlog_csv(const RunLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  write_runlog_csv(log, out);
  if (!out) throw IoError(path, "write failed");
}

RunLog read_runlog_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("runlog: missing header");
  const auto header = split(line, ',');
  // Recover the chain shape from the header.
  RunLog log;
  bool matched = false;
  for (int n = 1; n <= 16 && !matched; ++n) {
    for (int m = 3; m <= 16 && !matched; ++m) {
      if (runlog_columns(n, m) == header) {
        log.segments = n;
        log.tendons = m;
        matched = true;
      }
    }
  }
  if (!matched) throw ConfigError("runlog: header does not match the schema");

  const int n = log.segments, m = log.tendons;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw ConfigError("runlog: row width mismatch");
    RunRecord r;
    std::size_t c = 0;
    r.tick = std::stol(cells[c++]);
    r.time = parse_double(cells[c++]);
    r.setpoint = std::stoi(cells[c++]);
    for (Configurationd* q : {&r.q_d, &r.q_est, &r.q_true}) {
      *q = Configurationd(n);
      for (int k = 0; k < 2 * n; ++k) q->stacked()(k) = deg2rad(parse_double(cells[c++]));
    }
    for (Eigen::Vector3d* t : {&r.t_d, &r.t_est, &r.t_true}) {
      for (int k = 0; k < 3; ++k) (*t)(k) = parse_double(cells[c++]);
    }
    for (Eigen::MatrixXd* mat : {&r.tensions, &r.commands}) {
      mat->resize(n, m);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) (*mat)(i, j) = parse_double(cells[c++]);
      }
    }
    r.disturbance = cells[c++];
    log.records.push_back(std::move(r));
  }
  check_schema(log);
  return log;
}

RunLog read_runlog_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  return read_runlog_csv(in);
}

}  // namespace tdcm::harness

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

#include "tdcm/harness/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"

namespace tdcm::harness {
namespace {

namespace fs = std::filesystem;

class DatWriter {
 public:
  DatWriter(const fs::path& path, const std::vector<std::string>& columns)
      : path_(path.string()), out_(path, std::ios::binary) {
    if (!out_) throw IoError(path_, "cannot open for writing");
    out_ << "#";
    for (const auto& c : columns) out_ << ' ' << c;
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.10g", values[i]);
      out_ << (i ? " " : "") << buf;
    }
    out_ << '\n';
  }

  const std::string& path() const { return path_; }
  void close() {
    out_.close();
    if (!out_) throw IoError(path_, "write failed");
  }

 private:
  std::string path_;
  std::ofstream out_;
};

std::vector<std::string> config_columns(int n) {
  std::vector<std::string> cols{"time"};
  for (int i = 1; i <= n; ++i) {
    for (const char* var : {"phi", "theta"}) {
      for (const char* src : {"d", "est", "true"}) {
        cols.push_back(std::string(var) + std::to_string(i) + "_" + src);
      }
    }
  }
  return cols;
}

std::vector<double> config_row(const RunRecord& r) {
  std::vector<double> row{r.time};
  for (Eigen::Index i = 0; i < r.q_d.segment_count(); ++i) {
    for (int v = 0; v < 2; ++v) {
      for (const Configurationd* q : {&r.q_d, &r.q_est, &r.q_true}) {
        row.push_back(rad2deg(q->stacked()(2 * i + v)));
      }
    }
  }
  return row;
}

void write_config_series(const fs::path& path, const RunLog& log, std::size_t from,
                         std::size_t to, bool with_tip, std::vector<std::string>& written) {
  auto cols = config_columns(log.segments);
  if (with_tip) {
    for (const char* c : {"y_est", "y_true", "z_est", "z_true"}) cols.push_back(c);
  } else {
    cols.push_back("loaded");
  }
  DatWriter w(path, cols);
  for (std::size_t t = from; t < to; ++t) {
    const auto& r = log.records[t];
    auto row = config_row(r);
    if (with_tip) {
      row.insert(row.end(), {r.t_est.y(), r.t_true.y(), r.t_est.z(), r.t_true.z()});
    } else {
      row.push_back(r.disturbance == "none" ? 0.0 : 1.0);
    }
    w.row(row);
  }
  w.close();
  written.push_back(w.path());
}

}  // namespace

std::vector<std::string> export_results(const RunLog& log, const RmseReport& report,
                                        const std::string& dir, FigureSet figures) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
  const fs::path root(dir);
  std::vector<std::string> written;

  const std::string csv = (root / "runlog.csv").string();
  write_runlog_csv(log, csv);
  const RunLog reread = read_runlog_csv(csv);
  if (reread.records.size() != log.records.size()) {
    throw IoError(csv, "schema check after export found a different row count");
  }
  written.push_back(csv);

  const std::string json = (root / "rmse.json").string();
  write_report_json(report, json);
  written.push_back(json);

  switch (figures) {
    case FigureSet::kConfigTracking: {
      write_config_series(root / "fig6_config_tracking.dat", log, 0, log.records.size(),
                          true, written);
      std::vector<std::string> cols{"setpoint"};
      std::vector<std::string> vars;
      for (const auto& e : report.entries) {
        if (e.setpoint == report.entries.front().setpoint) vars.push_back(e.variable);
      }
      for (const auto& v : vars) cols.push_back(v + "_rmse");
      for (const auto& v : vars) cols.push_back(v + "_spread");
      DatWriter w(root / "fig7_config_rmse.dat", cols);
      std::map<int, std::vector<const RmseEntry*>> by_setpoint;
      for (const auto& e : report.entries) by_setpoint[e.setpoint].push_back(&e);
      for (const auto& [sp, entries] : by_setpoint) {
        std::vector<double> row{static_cast<double>(sp + 1)};
        for (const auto* e : entries) row.push_back(e->rmse);
        for (const auto* e : entries) row.push_back(e->spread);
        w.row(row);
      }
      w.close();
      written.push_back(w.path());
      break;
    }
    case FigureSet::kTaskTracking: {
      DatWriter w(root / "fig8_task_tracking.dat",
                  {"time", "y_d", "y_est", "y_true", "z_d", "z_est", "z_true"});
      for (const auto& r : log.records) {
        w.row({r.time, r.t_d.y(), r.t_est.y(), r.t_true.y(), r.t_d.z(), r.t_est.z(),
               r.t_true.z()});
      }
      w.close();
      written.push_back(w.path());
      break;
    }
    case FigureSet::kDisturbance: {
      // Split halfway through the quiet spell between the last tip load and
      // the first point load.
      const auto has = [&](std::size_t t, const char* kind) {
        return log.records[t].disturbance.find(kind) != std::string::npos;
      };
      std::size_t first_point = 0;
      while (first_point < log.records.size() && !has(first_point, "point_load")) ++first_point;
      std::size_t last_tip = 0;
      for (std::size_t t = 0; t < first_point; ++t) {
        if (has(t, "tip_load")) last_tip = t + 1;
      }
      const std::size_t settle = first_point == log.records.size()
                                     ? first_point
                                     : last_tip + (first_point - last_tip) / 2;
      write_config_series(root / "fig9_tip_load.dat", log, 0, settle, false, written);
      write_config_series(root / "fig10_point_load.dat", log, settle, log.records.size(),
                          false, written);
      break;
    }
  }
  return written;
}

}  // namespace tdcm::harness

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

#pragma once

#include <string>
#include <vector>

#include "tdcm/harness/rmse.hpp"
#include "tdcm/harness/run_log.hpp"

namespace tdcm::harness {

enum class FigureSet {
  kConfigTracking,  // fig6_config_tracking.dat, fig7_config_rmse.dat
  kTaskTracking,    // fig8_task_tracking.dat
  kDisturbance,     // fig9_tip_load.dat, fig10_point_load.dat
};

/// Writes runlog.csv, rmse.json and the plot data files of `figures` into
/// `dir` (created if needed). The CSV is re-read and schema-checked after
/// writing. Returns the written paths. Throws IoError with path context.
std::vector<std::string> export_results(const RunLog& log, const RmseReport& report,
                                        const std::string& dir, FigureSet figures);

}  // namespace tdcm::harness

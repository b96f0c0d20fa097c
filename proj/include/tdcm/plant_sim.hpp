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

// Quasi-static simulated manipulator. Tendon commands move the actuator
// target through the least-squares inverse of the tendon sensitivity; the
// backbone follows with a first-order lag; loads are rendered as elastic
// offsets on top of the unloaded shape.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tdcm/kinematics.hpp"
#include "tdcm/state_estimation.hpp"
#include "tdcm/tendon_actuation.hpp"

namespace tdcm {

enum class DisturbanceKind { kTipLoad, kPointLoad, kStepOffset };

std::string to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& name);

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::kTipLoad;
  // kg for kTipLoad; radians of curvature for kPointLoad and kStepOffset.
  double magnitude = 0.0;
  // Loaded segment (0-based) for kPointLoad and kStepOffset.
  int segment_index = 0;
  // Push direction of a point load, as a bending-plane angle in the base
  // frame of the loaded segment.
  double direction = 0.0;
  long start_tick = 0;
  long end_tick = 1;
  // Ticks over which the load builds up after start_tick; 0 = instantaneous.
  int ramp_ticks = 0;

  bool active_at(long tick) const { return tick >= start_tick && tick < end_tick; }
  /// Fraction of the full load present at `tick`.
  double ramp_fraction(long tick) const;
};

/// Throws std::invalid_argument unless start_tick < end_tick and
/// magnitude >= 0.
void validate(const DisturbanceSpec& spec);

struct ComplianceModel {
  // rad of bending per kg*m of gravity moment, per segment.
  std::vector<double> deflection_gain;
};

struct PlantParams {
  double lag_constant = 0.1;        // [s]; <= 0 disables the lag
  double tick_period = 0.05;        // [s]
  double tendon_stiffness = 500.0;  // [N/m]
  double rest_tension = 4.0;        // [N]
  double theta_max = kDefaultThetaMax;
};

struct PlantState {
  Configurationd q_true;      // ground truth, including rendered loads
  Configurationd q_unloaded;  // lagged backbone shape without loads
  Configurationd q_cmd;       // actuator target
  Eigen::MatrixXd payout;     // tendon lengths paid out by the actuators [m]
  double lag_constant = 0.0;  // [s]
  std::optional<DisturbanceSpec> disturbance;
  long tick = 0;
};

/// Settled plant at q0 with tendon payout matching the geometry exactly.
PlantState make_plant_state(const Configurationd& q0,
                            std::span<const SegmentGeometry> geom,
                            const PlantParams& params);

/// One control tick of actuation. Clears rendered loads (q_true becomes
/// the new unloaded shape); re-apply active disturbances afterwards.
PlantState apply_command(const PlantState& state, const TendonCommand& cmd,
                         std::span<const SegmentGeometry> geom,
                         const PlantParams& params);

/// Renders `spec` on top of state.q_true. Throws InvalidSegment for an
/// out-of-range segment_index.
PlantState apply_disturbance(const PlantState& state, const DisturbanceSpec& spec,
                             const ComplianceModel& compliance,
                             std::span<const SegmentGeometry> geom);

/// Per-segment bending (rad) a tip mass induces at configuration q:
/// the change in each theta after rendering the load.
Eigen::VectorXd tip_load_deflection(const Configurationd& q, double mass,
                                    const ComplianceModel& compliance,
                                    std::span<const SegmentGeometry> geom);

/// Uniform compliance for which `mass` at the tip of configuration q bends
/// the most-affected segment by exactly `max_deflection` radians.
ComplianceModel calibrate_compliance(const Configurationd& q, double mass,
                                     double max_deflection,
                                     std::span<const SegmentGeometry> geom);

struct SensorSample {
  SensorFrameSetd frames;
  TensionReadings tensions;
};

/// Linear-elastic tendon model with slack clipping.
TensionReadings tendon_tensions(const PlantState& state,
                                std::span<const SegmentGeometry> geom,
                                const PlantParams& params);

/// Orientation quaternions of q_true with additive Gaussian component
/// noise (renormalized), plus tendon tensions.
SensorSample read_sensors(const PlantState& state, double noise_sigma,
                          std::mt19937_64& rng,
                          std::span<const SegmentGeometry> geom,
                          const PlantParams& params);

/// What a control loop needs from a manipulator, simulated or real.
class ManipulatorDriver {
 public:
  virtual ~ManipulatorDriver() = default;
  virtual SensorSample read() = 0;
  virtual void command(const TendonCommand& cmd) = 0;
};

class SimulatedPlant : public ManipulatorDriver {
 public:
  SimulatedPlant(std::vector<SegmentGeometry> geom, PlantParams params,
                 ComplianceModel compliance, const Configurationd& q0,
                 double noise_sigma, std::uint64_t seed);

  SensorSample read() override;
  /// Applies the command, advances one tick and renders every scheduled
  /// disturbance active at the new tick.
  void command(const TendonCommand& cmd) override;

  void schedule(const DisturbanceSpec& spec);
  const std::vector<DisturbanceSpec>& disturbances() const { return schedule_; }
  /// Disturbances active at the current tick.
  std::vector<DisturbanceSpec> active_disturbances() const;

  const PlantState& state() const { return state_; }
  PlantState& mutable_state() { return state_; }
  std::span<const SegmentGeometry> geometry() const { return geom_; }
  const PlantParams& params() const { return params_; }

 private:
  void render_disturbances();

  std::vector<SegmentGeometry> geom_;
  PlantParams params_;
  ComplianceModel compliance_;
  double noise_sigma_;
  std::mt19937_64 rng_;
  PlantState state_;
  std::vector<DisturbanceSpec> schedule_;
};

}  // namespace tdcm

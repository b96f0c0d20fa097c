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

#include "tdcm/plant_sim.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdcm {
namespace {

// Rotation-vector form of a segment's bend, in the segment base xy-plane.
Eigen::Vector2d bend_vector(const SegmentConfigd& s) {
  return s.theta * Eigen::Vector2d(-std::sin(s.phi), std::cos(s.phi));
}

SegmentConfigd from_bend_vector(const Eigen::Vector2d& v) {
  const double theta = v.norm();
  if (theta < kSingularTheta) return {0.0, theta};
  return {std::atan2(-v.x(), v.y()), theta};
}

Configurationd clamp_theta(Configurationd q, double theta_max) {
  q = q.canonical();
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    q.theta(i) = std::min(q.theta(i), theta_max);
  }
  return q;
}

}  // namespace

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kTipLoad: return "tip_load";
    case DisturbanceKind::kPointLoad: return "point_load";
    case DisturbanceKind::kStepOffset: return "step_offset";
  }
  return "unknown";
}

DisturbanceKind disturbance_kind_from_string(const std::string& name) {
  if (name == "tip_load") return DisturbanceKind::kTipLoad;
  if (name == "point_load") return DisturbanceKind::kPointLoad;
  if (name == "step_offset") return DisturbanceKind::kStepOffset;
  throw std::invalid_argument("unknown disturbance kind '" + name + "'");
}

double DisturbanceSpec::ramp_fraction(long tick) const {
  if (!active_at(tick)) return 0.0;
  if (ramp_ticks <= 0) return 1.0;
  return std::min(1.0, static_cast<double>(tick - start_tick + 1) / ramp_ticks);
}

void validate(const DisturbanceSpec& spec) {
  if (!(spec.start_tick < spec.end_tick)) {
    throw std::invalid_argument("disturbance must start before it ends");
  }
  if (!(spec.magnitude >= 0.0)) {
    throw std::invalid_argument("disturbance magnitude must be non-negative");
  }
}

PlantState make_plant_state(const Configurationd& q0,
                            std::span<const SegmentGeometry> geom,
                            const PlantParams& params) {
  PlantState s;
  s.q_true = clamp_theta(q0, params.theta_max);
  s.q_unloaded = s.q_true;
  s.q_cmd = s.q_true;
  s.payout = tendon_lengths(s.q_true, geom).lengths;
  s.lag_constant = params.lag_constant;
  return s;
}

PlantState apply_command(const PlantState& state, const TendonCommand& cmd,
                         std::span<const SegmentGeometry> geom,
                         const PlantParams& params) {
  PlantState next = state;
  next.tick = state.tick + 1;
  next.disturbance.reset();

  if (cmd.deltas.cwiseAbs().maxCoeff() > 0.0) {
    // Tendon lengths are affine in each segment's bend vector, so the
    // least-squares shape change is exact and has no gauge at zero
    // curvature: l_j = const - r * (b.y cos a_j - b.x sin a_j).
    const Eigen::Index nt = cmd.deltas.cols();
    Configurationd q_cmd = state.q_cmd;
    for (Eigen::Index i = 0; i < q_cmd.segment_count(); ++i) {
      Eigen::MatrixXd a(nt, 2);
      for (Eigen::Index j = 0; j < nt; ++j) {
        const double angle = tendon_angle(static_cast<int>(j), static_cast<int>(nt));
        a.row(j) << std::sin(angle), -std::cos(angle);
      }
      a *= geom[i].tendon_radius;
      const Eigen::Vector2d db = a.colPivHouseholderQr().solve(cmd.deltas.row(i).transpose());
      q_cmd.set_segment(i, from_bend_vector(bend_vector(q_cmd.segment(i)) + db));
    }
    next.q_cmd = clamp_theta(q_cmd, params.theta_max);
    next.payout = state.payout + cmd.deltas;
  }

  // First-order lag, interpolated on the bend vectors so a straightening
  // segment passes through zero curvature instead of swinging its plane.
  const double follow = state.lag_constant > 0.0
                            ? 1.0 - std::exp(-params.tick_period / state.lag_constant)
                            : 1.0;
  for (Eigen::Index i = 0; i < next.q_cmd.segment_count(); ++i) {
    if (follow >= 1.0) {
      next.q_unloaded.set_segment(i, next.q_cmd.segment(i));
      continue;
    }
    const Eigen::Vector2d from = bend_vector(state.q_unloaded.segment(i));
    const Eigen::Vector2d to = bend_vector(next.q_cmd.segment(i));
    if (from == to) continue;
    next.q_unloaded.set_segment(i, from_bend_vector(from + follow * (to - from)));
  }
  next.q_true = next.q_unloaded;
  return next;
}

Eigen::VectorXd tip_load_deflection(const Configurationd& q, double mass,
                                    const ComplianceModel& compliance,
                                    std::span<const SegmentGeometry> geom) {
  DisturbanceSpec spec;
  spec.kind = DisturbanceKind::kTipLoad;
  spec.magnitude = mass;
  PlantState s;
  s.q_true = q;
  const PlantState loaded = apply_disturbance(s, spec, compliance, geom);
  Eigen::VectorXd out(q.segment_count());
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    out(i) = loaded.q_true.theta(i) - q.theta(i);
  }
  return out;
}

PlantState apply_disturbance(const PlantState& state, const DisturbanceSpec& spec,
                             const ComplianceModel& compliance,
                             std::span<const SegmentGeometry> geom) {
  validate(spec);
  const int n = static_cast<int>(state.q_true.segment_count());
  PlantState next = state;
  next.disturbance = spec;
  // Outside its window a spec is rendered at full strength.
  const double scale = spec.active_at(state.tick) ? spec.ramp_fraction(state.tick) : 1.0;
  const double magnitude = spec.magnitude * scale;
  if (magnitude == 0.0) return next;

  switch (spec.kind) {
    case DisturbanceKind::kTipLoad: {
      if (static_cast<int>(compliance.deflection_gain.size()) != n) {
        throw std::invalid_argument("compliance model must cover every segment");
      }
      const auto pose = forward_kinematics(state.q_true, geom);
      const Eigen::Vector3d tip = pose.tip.translation();
      const Eigen::Vector3d down(0.0, 0.0, -1.0);
      for (int i = 0; i < n; ++i) {
        const HomogeneousTransform<double> base =
            i == 0 ? HomogeneousTransform<double>::Identity() : pose.frames[i - 1];
        // Gravity moment of the tip mass about the segment base [kg*m].
        const Eigen::Vector3d moment = magnitude * (tip - base.translation()).cross(down);
        const Eigen::Vector3d local = base.linear().transpose() * moment;
        const Eigen::Vector2d bend = bend_vector(state.q_true.segment(i)) +
                                     compliance.deflection_gain[i] * local.head<2>();
        next.q_true.set_segment(i, from_bend_vector(bend));
      }
      break;
    }
    case DisturbanceKind::kPointLoad: {
      if (spec.segment_index < 0 || spec.segment_index >= n) {
        throw InvalidSegment(spec.segment_index, n);
      }
      const int i = spec.segment_index;
      const Eigen::Vector2d push =
          magnitude * Eigen::Vector2d(-std::sin(spec.direction), std::cos(spec.direction));
      next.q_true.set_segment(i, from_bend_vector(bend_vector(state.q_true.segment(i)) + push));
      break;
    }
    case DisturbanceKind::kStepOffset: {
      if (spec.segment_index < 0 || spec.segment_index >= n) {
        throw InvalidSegment(spec.segment_index, n);
      }
      next.q_true.theta(spec.segment_index) += magnitude;
      break;
    }
  }
  next.q_true = next.q_true.canonical();
  return next;
}

ComplianceModel calibrate_compliance(const Configurationd& q, double mass,
                                     double max_deflection,
                                     std::span<const SegmentGeometry> geom) {
  const auto peak = [&](double gain) {
    ComplianceModel m{std::vector<double>(q.segment_count(), gain)};
    return tip_load_deflection(q, mass, m, geom).cwiseAbs().maxCoeff();
  };
  double lo = 0.0, hi = 1.0;
  while (peak(hi) < max_deflection) {
    hi *= 2.0;
    if (hi > 1e6) throw std::invalid_argument("load cannot reach the requested deflection");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (peak(mid) < max_deflection ? lo : hi) = mid;
  }
  return {std::vector<double>(q.segment_count(), 0.5 * (lo + hi))};
}

TensionReadings tendon_tensions(const PlantState& state,
                                std::span<const SegmentGeometry> geom,
                                const PlantParams& params) {
  const Eigen::MatrixXd stretch = tendon_lengths(state.q_true, geom).lengths - state.payout;
  return {(params.rest_tension + params.tendon_stiffness * stretch.array())
              .cwiseMax(0.0)
              .matrix()};
}

SensorSample read_sensors(const PlantState& state, double noise_sigma,
                          std::mt19937_64& rng,
                          std::span<const SegmentGeometry> geom,
                          const PlantParams& params) {
  SensorSample sample;
  sample.frames = frames_from_pose(forward_kinematics(state.q_true, geom));
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (auto& quat : sample.frames.tip_orientations) {
      for (int k = 0; k < 4; ++k) quat.coeffs()(k) += noise(rng);
      quat.normalize();
    }
  }
  sample.tensions = tendon_tensions(state, geom, params);
  return sample;
}

SimulatedPlant::SimulatedPlant(std::vector<SegmentGeometry> geom, PlantParams params,
                               ComplianceModel compliance, const Configurationd& q0,
                               double noise_sigma, std::uint64_t seed)
    : geom_(std::move(geom)),
      params_(params),
      compliance_(std::move(compliance)),
      noise_sigma_(noise_sigma),
      rng_(seed),
      state_(make_plant_state(q0, geom_, params_)) {
  if (compliance_.deflection_gain.empty()) {
    compliance_.deflection_gain.assign(geom_.size(), 0.0);
  }
}

SensorSample SimulatedPlant::read() {
  return read_sensors(state_, noise_sigma_, rng_, geom_, params_);
}

void SimulatedPlant::command(const TendonCommand& cmd) {
  state_ = apply_command(state_, cmd, geom_, params_);
  render_disturbances();
}

void SimulatedPlant::schedule(const DisturbanceSpec& spec) {
  validate(spec);
  const int n = static_cast<int>(geom_.size());
  if (spec.kind != DisturbanceKind::kTipLoad &&
      (spec.segment_index < 0 || spec.segment_index >= n)) {
    throw InvalidSegment(spec.segment_index, n);
  }
  schedule_.push_back(spec);
  render_disturbances();
}

std::vector<DisturbanceSpec> SimulatedPlant::active_disturbances() const {
  std::vector<DisturbanceSpec> active;
  for (const auto& d : schedule_) {
    if (d.active_at(state_.tick)) active.push_back(d);
  }
  return active;
}

void SimulatedPlant::render_disturbances() {
  PlantState s = state_;
  s.q_true = s.q_unloaded;
  s.disturbance.reset();
  for (const auto& d : schedule_) {
    if (d.active_at(s.tick)) s = apply_disturbance(s, d, compliance_, geom_);
  }
  state_ = s;
}

}  // namespace tdcm

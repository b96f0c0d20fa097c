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

// Shared helpers and reference models for the unit and acceptance tests.
// Oracles here deliberately avoid the library's own formulas.

#pragma once

#include <Eigen/Geometry>
#include <cmath>
#include <random>
#include <vector>

#include "tdcm/angles.hpp"
#include "tdcm/kinematics.hpp"

namespace tdcm::testing {

inline std::vector<SegmentGeometry> default_chain() { return std::vector<SegmentGeometry>(3); }

/// Uniform random configuration, theta in [lo, hi] radians.
inline Configurationd random_configuration(std::mt19937_64& rng, Eigen::Index n, double lo,
                                           double hi) {
  std::uniform_real_distribution<double> phi(-kPi<double>, kPi<double>);
  std::uniform_real_distribution<double> theta(lo, hi);
  Configurationd q(n);
  for (Eigen::Index i = 0; i < n; ++i) q.set_segment(i, {wrap_angle(phi(rng)), theta(rng)});
  return q;
}

/// Arc tip position by Simpson integration of the unit tangent along the
/// backbone; curvature theta / L in the plane at angle phi.
inline Eigen::Vector3d integrated_arc(double phi, double theta, double length,
                                      int intervals = 2000) {
  const double kappa = theta / length;
  const auto tangent = [&](double s) {
    return Eigen::Vector3d(std::cos(phi) * std::sin(kappa * s),
                           std::sin(phi) * std::sin(kappa * s), std::cos(kappa * s));
  };
  const double h = length / intervals;
  Eigen::Vector3d sum = tangent(0.0) + tangent(length);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * tangent(k * h);
  return sum * h / 3.0;
}

/// Bending of a segment as a rotation by theta about the in-plane axis
/// perpendicular to the bending direction.
inline Eigen::Matrix3d axis_angle_rotation(double phi, double theta) {
  const Eigen::Vector3d axis(-std::sin(phi), std::cos(phi), 0.0);
  return Eigen::AngleAxisd(theta, axis).toRotationMatrix();
}

/// A segment modelled as `beads` rigid links, each a half rotation, a
/// straight step along the local z axis and another half rotation.
inline Eigen::Isometry3d bead_chain(const Configurationd& q, const std::vector<SegmentGeometry>& geom,
                                    int beads = 16) {
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    const double step = geom[static_cast<std::size_t>(i)].length / beads;
    const Eigen::Vector3d axis(-std::sin(q.phi(i)), std::cos(q.phi(i)), 0.0);
    const Eigen::AngleAxisd half(q.theta(i) / (2.0 * beads), axis);
    for (int b = 0; b < beads; ++b) {
      pose.rotate(half);
      pose.translate(Eigen::Vector3d(0.0, 0.0, step));
      pose.rotate(half);
    }
  }
  return pose;
}

}  // namespace tdcm::testing

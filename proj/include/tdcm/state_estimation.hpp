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

// Arc-parameter estimation from per-segment tip orientation quaternions.
// Quaternions use Eigen's coefficient order, which is also the sensor wire
// order [x, y, z, w].

#pragma once

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <vector>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"
#include "tdcm/kinematics.hpp"

namespace tdcm {

template <typename Scalar>
using Quaternion = Eigen::Quaternion<Scalar>;

inline constexpr double kDegenerateQuaternionNorm = 1e-3;

/// The arctangent of the orientation ratio measures the bending plane from a
/// frame rotated a quarter turn, with opposite handedness, relative to the
/// bending-plane angle of segment_rotation(). phi = wrap(offset - atan2(...)).
inline constexpr double kBendingPlaneOffset = -std::numbers::pi / 2;

template <typename Scalar>
struct SensorFrameSet {
  Quaternion<Scalar> base_orientation = Quaternion<Scalar>::Identity();
  std::vector<Quaternion<Scalar>> tip_orientations;
};

using SensorFrameSetd = SensorFrameSet<double>;

/// Shortest signed angular difference, wrapped into (-pi, pi].
template <typename Scalar>
Scalar wrap_shortest(Scalar delta_phi) {
  return wrap_angle(delta_phi);
}

namespace internal {

template <typename Scalar>
Quaternion<Scalar> checked_normalized(const Quaternion<Scalar>& q,
                                      int segment) {
  const Scalar n = q.norm();
  if (!(n >= Scalar(kDegenerateQuaternionNorm))) {
    throw DegenerateQuaternion(static_cast<double>(n), segment);
  }
  return Quaternion<Scalar>(q.coeffs() / n);
}

template <typename Scalar>
Quaternion<Scalar> with_positive_w(const Quaternion<Scalar>& q) {
  return q.w() < Scalar(0) ? Quaternion<Scalar>(-q.coeffs()) : q;
}

}  // namespace internal

/// parent^-1 * tip, normalized, with w >= 0.
template <typename Scalar>
Quaternion<Scalar> relative_orientation(const Quaternion<Scalar>& tip,
                                        const Quaternion<Scalar>& parent) {
  const auto t = internal::checked_normalized(tip, -1);
  const auto p = internal::checked_normalized(parent, -1);
  Quaternion<Scalar> r = p.conjugate() * t;
  r.normalize();
  return internal::with_positive_w(r);
}

/// Bending-plane and curvature angles of a segment from the orientation of
/// its tip relative to its base. Always returns the canonical chart.
template <typename Scalar>
SegmentConfig<Scalar> arc_parameters_from_quaternion(
    const Quaternion<Scalar>& orientation) {
  using std::acos;
  using std::atan2;
  const auto q =
      internal::with_positive_w(internal::checked_normalized(orientation, -1));
  const Scalar x = q.x(), y = q.y(), z = q.z(), w = q.w();

  const Scalar c = std::clamp(Scalar(2) * w * w - Scalar(1) + Scalar(2) * z * z,
                              Scalar(-1), Scalar(1));
  SegmentConfig<Scalar> cfg;
  cfg.theta = acos(c);
  if (cfg.theta < Scalar(kSingularTheta)) {
    cfg.phi = Scalar(0);
    return cfg;
  }
  const Scalar plane = atan2(x * z - w * y, y * z + w * x);
  cfg.phi = wrap_angle(Scalar(kBendingPlaneOffset) - plane);
  return cfg;
}

/// Segment i is measured against the tip of segment i-1; the first segment
/// against the base orientation.
template <typename Scalar>
Configuration<Scalar> estimate_configuration(
    const SensorFrameSet<Scalar>& frames) {
  const auto n = static_cast<Eigen::Index>(frames.tip_orientations.size());
  Configuration<Scalar> q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int idx = static_cast<int>(i);
    const auto parent = internal::checked_normalized(
        i == 0 ? frames.base_orientation : frames.tip_orientations[i - 1], idx);
    const auto tip = internal::checked_normalized(frames.tip_orientations[i], idx);
    q.set_segment(i, arc_parameters_from_quaternion(
                         relative_orientation(tip, parent)));
  }
  return q;
}

/// Orientation quaternions (base frame) of every segment tip in a chain.
template <typename Scalar>
SensorFrameSet<Scalar> frames_from_pose(const ChainPose<Scalar>& pose) {
  SensorFrameSet<Scalar> frames;
  frames.tip_orientations.reserve(pose.frames.size());
  for (const auto& f : pose.frames) {
    frames.tip_orientations.push_back(
        internal::with_positive_w(Quaternion<Scalar>(f.linear()).normalized()));
  }
  return frames;
}

}  // namespace tdcm

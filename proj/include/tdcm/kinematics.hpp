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

// Piecewise-constant-curvature kinematics for a serial chain of bending
// segments. Each segment is a circular arc described by its bending-plane
// angle phi (about the segment base z-axis) and its curvature angle theta
// (total angle subtended by the backbone arc).

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "tdcm/angles.hpp"
#include "tdcm/errors.hpp"

namespace tdcm {

/// Below this |theta| the straight-segment series expansions are used.
inline constexpr double kSingularTheta = 1e-6;

/// Default mechanical bending limit.
inline constexpr double kDefaultThetaMax = std::numbers::pi / 2;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using HomogeneousTransform = Eigen::Transform<Scalar, 3, Eigen::Isometry>;

template <typename Scalar>
struct SegmentConfig {
  Scalar phi{0};
  Scalar theta{0};

  friend bool operator==(const SegmentConfig&, const SegmentConfig&) = default;
};

/// Canonical chart: theta >= 0 and phi in (-pi, pi]. A negative curvature is
/// the same arc bent in the opposite plane.
template <typename Scalar>
SegmentConfig<Scalar> canonicalize(SegmentConfig<Scalar> cfg) {
  if (cfg.theta < Scalar(0)) {
    cfg.theta = -cfg.theta;
    cfg.phi += kPi<Scalar>;
  }
  cfg.phi = wrap_angle(cfg.phi);
  return cfg;
}

/// Stacked arc parameters q = [phi_1, theta_1, ..., phi_n, theta_n].
template <typename Scalar>
class Configuration {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Configuration() = default;
  explicit Configuration(Eigen::Index segment_count)
      : q_(Vector::Zero(2 * segment_count)) {}

  Configuration(std::initializer_list<SegmentConfig<Scalar>> segments)
      : Configuration(std::span<const SegmentConfig<Scalar>>(
            segments.begin(), segments.size())) {}

  explicit Configuration(std::span<const SegmentConfig<Scalar>> segments)
      : q_(2 * static_cast<Eigen::Index>(segments.size())) {
    for (Eigen::Index i = 0; i < segment_count(); ++i) set_segment(i, segments[i]);
  }

  static Configuration FromStacked(const Vector& q) {
    if (q.size() % 2 != 0) {
      throw std::invalid_argument("stacked configuration must have even size");
    }
    Configuration c;
    c.q_ = q;
    return c;
  }

  Eigen::Index segment_count() const { return q_.size() / 2; }

  SegmentConfig<Scalar> segment(Eigen::Index i) const {
    return {q_(2 * i), q_(2 * i + 1)};
  }
  void set_segment(Eigen::Index i, const SegmentConfig<Scalar>& cfg) {
    q_(2 * i) = cfg.phi;
    q_(2 * i + 1) = cfg.theta;
  }

  Scalar& phi(Eigen::Index i) { return q_(2 * i); }
  Scalar phi(Eigen::Index i) const { return q_(2 * i); }
  Scalar& theta(Eigen::Index i) { return q_(2 * i + 1); }
  Scalar theta(Eigen::Index i) const { return q_(2 * i + 1); }

  const Vector& stacked() const { return q_; }
  Vector& stacked() { return q_; }

  Configuration canonical() const {
    Configuration c = *this;
    for (Eigen::Index i = 0; i < segment_count(); ++i) {
      c.set_segment(i, canonicalize(segment(i)));
    }
    return c;
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.q_.size() == b.q_.size() && a.q_ == b.q_;
  }

 private:
  Vector q_;
};

using Configurationd = Configuration<double>;
using SegmentConfigd = SegmentConfig<double>;

struct SegmentGeometry {
  double length = 1.0 / 3.0;         // backbone arc length [m]
  double tendon_radius = 0.025;      // tendon offset from backbone [m]
  int tendon_count = 4;
};

/// Throws std::invalid_argument unless length > 0, tendon_radius > 0 and
/// tendon_count >= 3.
void validate(const SegmentGeometry& geom);

/// Arc translation from the segment base to its tip, expressed in the base
/// frame. Uses the series expansion for |theta| < kSingularTheta.
template <typename Scalar>
Vector3<Scalar> segment_translation(const SegmentConfig<Scalar>& cfg,
                                    Scalar length) {
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar th = cfg.theta;
  Scalar one_minus_cos_over_theta;  // (1 - cos th) / th
  Scalar sin_over_theta;            // sin th / th
  if (abs(th) < Scalar(kSingularTheta)) {
    const Scalar th2 = th * th;
    one_minus_cos_over_theta = th / Scalar(2) - th * th2 / Scalar(24);
    sin_over_theta = Scalar(1) - th2 / Scalar(6);
  } else {
    const Scalar half = sin(th / Scalar(2));  // 1 - cos th without cancellation
    one_minus_cos_over_theta = Scalar(2) * half * half / th;
    sin_over_theta = sin(th) / th;
  }
  return length * Vector3<Scalar>(cos(cfg.phi) * one_minus_cos_over_theta,
                                  sin(cfg.phi) * one_minus_cos_over_theta,
                                  sin_over_theta);
}

/// Rz(phi) * Ry(theta) * Rz(-phi), written out entrywise.
template <typename Scalar>
Matrix3<Scalar> segment_rotation(const SegmentConfig<Scalar>& cfg) {
  using std::cos;
  using std::sin;
  const Scalar cp = cos(cfg.phi), sp = sin(cfg.phi);
  const Scalar ct = cos(cfg.theta), st = sin(cfg.theta);
  const Scalar vt = ct - Scalar(1);
  Matrix3<Scalar> r;
  r << cp * cp * vt + Scalar(1), sp * cp * vt, cp * st,
       sp * cp * vt, cp * cp * (Scalar(1) - ct) + ct, sp * st,
       -cp * st, -sp * st, ct;
  return r;
}

template <typename Scalar>
HomogeneousTransform<Scalar> segment_transform(const SegmentConfig<Scalar>& cfg,
                                               Scalar length) {
  HomogeneousTransform<Scalar> t = HomogeneousTransform<Scalar>::Identity();
  t.linear() = segment_rotation(cfg);
  t.translation() = segment_translation(cfg, length);
  return t;
}

template <typename Scalar>
struct ChainPose {
  /// Base to end-effector.
  HomogeneousTransform<Scalar> tip;
  /// frames[i] maps the tip frame of segment i into the base frame.
  std::vector<HomogeneousTransform<Scalar>> frames;
};

template <typename Scalar>
ChainPose<Scalar> forward_kinematics(const Configuration<Scalar>& q,
                                     std::span<const SegmentGeometry> geom) {
  if (q.segment_count() != static_cast<Eigen::Index>(geom.size())) {
    throw MismatchedChainLength(q.segment_count(),
                                static_cast<long>(geom.size()));
  }
  ChainPose<Scalar> pose;
  pose.tip = HomogeneousTransform<Scalar>::Identity();
  pose.frames.reserve(geom.size());
  for (Eigen::Index i = 0; i < q.segment_count(); ++i) {
    pose.tip = pose.tip * segment_transform(q.segment(i), Scalar(geom[i].length));
    pose.frames.push_back(pose.tip);
  }
  return pose;
}

template <typename Scalar>
Vector3<Scalar> tip_position(const Configuration<Scalar>& q,
                             std::span<const SegmentGeometry> geom) {
  return forward_kinematics(q, geom).tip.translation();
}

/// Total backbone length of the chain.
double chain_length(std::span<const SegmentGeometry> geom);

}  // namespace tdcm

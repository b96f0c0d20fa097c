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

#include "tdcm/kinematics.hpp"

#include <numeric>
#include <stdexcept>

namespace tdcm {

void validate(const SegmentGeometry& geom) {
  if (!(geom.length > 0.0)) {
    throw std::invalid_argument("segment length must be positive");
  }
  if (!(geom.tendon_radius > 0.0)) {
    throw std::invalid_argument("tendon radius must be positive");
  }
  if (geom.tendon_count < 3) {
    throw std::invalid_argument("a segment needs at least 3 tendons");
  }
}

double chain_length(std::span<const SegmentGeometry> geom) {
  return std::accumulate(
      geom.begin(), geom.end(), 0.0,
      [](double acc, const SegmentGeometry& g) { return acc + g.length; });
}

}  // namespace tdcm

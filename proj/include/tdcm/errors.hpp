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

#include <stdexcept>
#include <string>

namespace tdcm {

// Configuration and geometry disagree on the number of segments.
class MismatchedChainLength : public std::invalid_argument {
 public:
  MismatchedChainLength(long config_segments, long geometry_segments)
      : std::invalid_argument("configuration has " +
                              std::to_string(config_segments) +
                              " segments but geometry has " +
                              std::to_string(geometry_segments)),
        config_segments_(config_segments),
        geometry_segments_(geometry_segments) {}

  long config_segments() const { return config_segments_; }
  long geometry_segments() const { return geometry_segments_; }

 private:
  long config_segments_;
  long geometry_segments_;
};

// A quaternion too close to zero to normalize. `segment` is -1 when the
// failure is not tied to a particular segment (or refers to the base).
class DegenerateQuaternion : public std::domain_error {
 public:
  explicit DegenerateQuaternion(double norm, int segment = -1)
      : std::domain_error(
            "degenerate quaternion (norm " + std::to_string(norm) + ")" +
            (segment >= 0 ? " at segment " + std::to_string(segment) : "")),
        norm_(norm),
        segment_(segment) {}

  double norm() const { return norm_; }
  int segment() const { return segment_; }

 private:
  double norm_;
  int segment_;
};

class InvalidSegment : public std::out_of_range {
 public:
  InvalidSegment(int index, int count)
      : std::out_of_range("segment index " + std::to_string(index) +
                          " out of range for a " + std::to_string(count) +
                          "-segment chain") {}
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace tdcm

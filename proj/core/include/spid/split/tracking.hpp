// Copyright 2026 The spid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPID_SPLIT_TRACKING_HPP_
#define SPID_SPLIT_TRACKING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "spid/errors.hpp"
#include "spid/split/splitter.hpp"
#include "spid/vec.hpp"

namespace spid::split {

// One processed camera frame: when it was taken and the node walk found in it.
struct SplitFrame {
  double time = 0.0;
  SplitResult splits;
};

// Per-node planar velocity at the latest frame: finite differences between
// consecutive frames, then a moving average over the last `window`
// differences. window = 1 is the raw two-point difference.
inline std::vector<Vec2d> estimate_node_velocities(
    std::span<const SplitFrame> frames, int window) {
  if (frames.size() < 2) {
    throw EmptyInputError("velocity estimate needs >= 2 frames");
  }
  if (window < 1) throw ConfigError("smoothing window must be >= 1");
  const int nodes = frames.front().splits.size();
  for (const auto& frame : frames) {
    if (frame.splits.size() != nodes) {
      throw DimensionMismatchError("frames disagree on node count");
    }
  }

  for (std::size_t k = 1; k < frames.size(); ++k) {
    if (!(frames[k].time > frames[k - 1].time)) {
      throw NonMonotonicTimeError("frame timestamps must increase");
    }
  }

  const std::size_t diff_count = frames.size() - 1;
  const std::size_t used = std::min<std::size_t>(window, diff_count);
  std::vector<Vec2d> velocity(static_cast<std::size_t>(nodes),
                              Vec2d::Zero());
  for (std::size_t k = diff_count - used; k < diff_count; ++k) {
    const double dt = frames[k + 1].time - frames[k].time;
    for (int i = 0; i < nodes; ++i) {
      velocity[i] += (frames[k + 1].splits.points[i] -
                      frames[k].splits.points[i]) /
                     dt;
    }
  }
  for (auto& v : velocity) v /= static_cast<double>(used);
  return velocity;
}

}  // namespace spid::split

#endif  // SPID_SPLIT_TRACKING_HPP_

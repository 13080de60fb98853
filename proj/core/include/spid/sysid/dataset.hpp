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

#ifndef SPID_SYSID_DATASET_HPP_
#define SPID_SYSID_DATASET_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "spid/errors.hpp"
#include "spid/rope/state.hpp"
#include "spid/vec.hpp"

namespace spid::sysid {

// Position-only motion record used for identification. Sample t holds the
// stacked node positions [p_0; ...; p_N] (3(N+1) entries) observed at time
// t * sample_dt; controls[t] is the anchor velocity command held over the
// interval from sample t to sample t+1, so there is one fewer control than
// samples. Velocities are not observed; the rope is assumed released from
// rest, so the initial velocity is zero.
struct SysIdDataset {
  std::vector<Eigen::VectorXd> positions;
  std::vector<Vec3d> controls;
  double sample_dt = 0.01;

  // Number of recorded intervals T (samples 0..T).
  int sample_steps() const { return static_cast<int>(controls.size()); }

  int point_count() const {
    return positions.empty() ? 0
                             : static_cast<int>(positions.front().size()) / 3;
  }

  void validate() const {
    if (positions.size() < 2) {
      throw EmptyInputError("dataset needs at least two position samples");
    }
    if (controls.size() + 1 != positions.size()) {
      throw DimensionMismatchError(
          "dataset needs exactly one control per sample interval");
    }
    if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) {
      throw ConfigError("sample interval must be positive and finite");
    }
    const Eigen::Index width = positions.front().size();
    if (width < 6 || width % 3 != 0) {
      throw DimensionMismatchError(
          "position samples must stack 3 coordinates per node");
    }
    for (const Eigen::VectorXd& sample : positions) {
      if (sample.size() != width) {
        throw DimensionMismatchError("position samples differ in width");
      }
      if (!sample.allFinite()) {
        throw NonFiniteError("dataset contains a non-finite position");
      }
    }
    for (const Vec3d& u : controls) {
      if (!u.allFinite()) {
        throw NonFiniteError("dataset contains a non-finite control");
      }
    }
  }
};

// Stacks a state's node positions into the dataset sample layout.
inline Eigen::VectorXd flatten_positions(const rope::RopeState& state) {
  const int n_points = static_cast<int>(state.positions.size());
  Eigen::VectorXd flat(3 * n_points);
  for (int i = 0; i < n_points; ++i) {
    for (int d = 0; d < 3; ++d) flat[3 * i + d] = state.positions[i][d];
  }
  return flat;
}

// Builds a dataset from a simulated trajectory sampled every `sample_dt`
// seconds. `states` must hold one state per sample (the rollout output at
// the control rate) and `controls` the command held over each interval.
inline SysIdDataset dataset_from_states(std::span<const rope::RopeState> states,
                                        std::span<const Vec3d> controls,
                                        double sample_dt) {
  if (states.size() != controls.size() + 1) {
    throw DimensionMismatchError(
        "trajectory needs exactly one control per sample interval");
  }
  SysIdDataset data;
  data.sample_dt = sample_dt;
  data.positions.reserve(states.size());
  for (const rope::RopeState& s : states) {
    data.positions.push_back(flatten_positions(s));
  }
  data.controls.assign(controls.begin(), controls.end());
  data.validate();
  return data;
}

// State at sample 0: recorded positions, zero velocities (released from
// rest).
inline rope::RopeState initial_state(const SysIdDataset& data) {
  data.validate();
  const int n_points = data.point_count();
  rope::RopeState state;
  state.positions.resize(static_cast<std::size_t>(n_points));
  state.velocities.assign(static_cast<std::size_t>(n_points), Vec3d::Zero());
  const Eigen::VectorXd& flat = data.positions.front();
  for (int i = 0; i < n_points; ++i) {
    for (int d = 0; d < 3; ++d) state.positions[i][d] = flat[3 * i + d];
  }
  return state;
}

}  // namespace spid::sysid

#endif  // SPID_SYSID_DATASET_HPP_

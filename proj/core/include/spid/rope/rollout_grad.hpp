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

#ifndef SPID_ROPE_ROLLOUT_GRAD_HPP_
#define SPID_ROPE_ROLLOUT_GRAD_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spid/diff/scalar.hpp"
#include "spid/diff/tape.hpp"
#include "spid/errors.hpp"
#include "spid/rope/model.hpp"
#include "spid/rope/state.hpp"

namespace spid::rope {

// Loss and gradient of a scalar objective accumulated over a controlled
// rollout, differentiated with respect to a flat vector of leaves.
struct RolloutGradResult {
  double loss = 0.0;
  Eigen::VectorXd gradient;
  // State at the end of every control window, as in rollout().
  std::vector<RopeState> states;
};

// Reverse-mode gradient of a rollout objective, with recompute-from-
// checkpoint memory behavior: the forward pass runs on plain doubles and
// stores one state per control window; the backward pass re-records one
// window at a time on a tape whose leaf prefix (the trainable vector) stays
// pinned, carrying the state adjoint across window boundaries. Gradients
// accumulate in descending window order, so results are deterministic for a
// fixed program and input.
//
// A Program describes the rollout in terms of the leaves. It provides
//   template <typename Real>
//   Instance instantiate(std::span<const Real> leaves) const;
// where the returned instance exposes
//   rope::RopeParamsT<Real> params;
//   Vec3T<Real> control(const rope::RopeStateT<Real>& state, int k) const;
//   Real step_loss(const rope::RopeStateT<Real>& state, int k) const;
// control() sees the state at the start of window k and is held for all
// substeps of that window; step_loss() sees the state at the end of window k
// and its contributions sum to the objective. Either may ignore k.
template <typename Program>
RolloutGradResult rollout_gradient(const Program& program,
                                   const RopeState& initial,
                                   const Eigen::VectorXd& leaf_values,
                                   int control_steps, double dt,
                                   int substeps) {
  using diff::Scalar;
  if (control_steps < 0 || substeps < 1) {
    throw DimensionMismatchError("rollout_gradient needs control_steps >= 0 "
                                 "and substeps >= 1");
  }
  check_state_shape(initial);
  const int n_points = initial.point_count();
  const int n_leaves = static_cast<int>(leaf_values.size());

  RolloutGradResult result;
  result.gradient = Eigen::VectorXd::Zero(n_leaves);
  result.states.reserve(control_steps);

  // Forward pass on doubles, checkpointing the state entering every window.
  std::vector<RopeState> checkpoints;
  checkpoints.reserve(control_steps + 1);
  checkpoints.push_back(initial);
  {
    const std::span<const double> plain_leaves(leaf_values.data(),
                                               leaf_values.size());
    auto plain = program.template instantiate<double>(plain_leaves);
    RopeState state = initial;
    for (int k = 0; k < control_steps; ++k) {
      const Vec3d u = plain.control(state, k);
      for (int s = 0; s < substeps; ++s) {
        state = step(state, u, plain.params, dt);
      }
      result.loss += plain.step_loss(state, k);
      result.states.push_back(state);
      checkpoints.push_back(state);
    }
  }
  if (!std::isfinite(result.loss)) {
    throw NonFiniteError("rollout objective is not finite");
  }
  if (n_leaves == 0 || control_steps == 0) return result;

  // Backward pass, one window per tape segment.
  diff::Tape tape;
  std::vector<Scalar> leaves;
  leaves.reserve(n_leaves);
  for (int i = 0; i < n_leaves; ++i) {
    leaves.push_back(diff::make_leaf(tape, leaf_values[i]));
  }
  tape.mark_leaf_prefix();

  std::vector<Vec3d> carried_pos(n_points, Vec3d::Zero());
  std::vector<Vec3d> carried_vel(n_points, Vec3d::Zero());
  std::vector<double> adjoints;
  for (int k = control_steps - 1; k >= 0; --k) {
    tape.reset_to_leaf_prefix();
    auto taped = program.template instantiate<Scalar>(
        std::span<const Scalar>(leaves.data(), leaves.size()));

    RopeStateT<Scalar> state;
    state.positions.resize(n_points);
    state.velocities.resize(n_points);
    std::vector<std::int32_t> state_leaf(6 * n_points);
    const RopeState& entry = checkpoints[static_cast<std::size_t>(k)];
    for (int i = 0; i < n_points; ++i) {
      for (int d = 0; d < 3; ++d) {
        Scalar p = diff::make_leaf(tape, entry.positions[i][d]);
        Scalar v = diff::make_leaf(tape, entry.velocities[i][d]);
        state_leaf[static_cast<std::size_t>(6 * i + d)] = p.idx;
        state_leaf[static_cast<std::size_t>(6 * i + 3 + d)] = v.idx;
        state.positions[i][d] = p;
        state.velocities[i][d] = v;
      }
    }

    const Vec3T<Scalar> u = taped.control(state, k);
    for (int s = 0; s < substeps; ++s) {
      state = step(state, u, taped.params, dt);
    }
    const Scalar window_loss = taped.step_loss(state, k);

    adjoints.assign(static_cast<std::size_t>(tape.size()), 0.0);
    if (window_loss.idx >= 0) {
      adjoints[static_cast<std::size_t>(window_loss.idx)] = 1.0;
    }
    for (int i = 0; i < n_points; ++i) {
      for (int d = 0; d < 3; ++d) {
        const std::int32_t pi = state.positions[i][d].idx;
        const std::int32_t vi = state.velocities[i][d].idx;
        if (pi >= 0) adjoints[static_cast<std::size_t>(pi)] += carried_pos[i][d];
        if (vi >= 0) adjoints[static_cast<std::size_t>(vi)] += carried_vel[i][d];
      }
    }
    tape.backward(adjoints);

    for (int i = 0; i < n_leaves; ++i) {
      result.gradient[i] += adjoints[static_cast<std::size_t>(leaves[i].idx)];
    }
    for (int i = 0; i < n_points; ++i) {
      for (int d = 0; d < 3; ++d) {
        carried_pos[i][d] =
            adjoints[static_cast<std::size_t>(state_leaf[6 * i + d])];
        carried_vel[i][d] =
            adjoints[static_cast<std::size_t>(state_leaf[6 * i + 3 + d])];
      }
    }
  }

  if (!result.gradient.allFinite()) {
    throw NonFiniteError("rollout gradient is not finite");
  }
  return result;
}

}  // namespace spid::rope

#endif  // SPID_ROPE_ROLLOUT_GRAD_HPP_

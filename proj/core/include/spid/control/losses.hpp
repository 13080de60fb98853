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

#ifndef SPID_CONTROL_LOSSES_HPP_
#define SPID_CONTROL_LOSSES_HPP_

#include <cmath>
#include <vector>

#include "spid/control/policy.hpp"
#include "spid/errors.hpp"
#include "spid/rope/energy.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/state.hpp"

namespace spid::control {

// Stabilization objective: energy of the final state relative to the
// straight-hanging rest configuration, so a perfectly stabilized rope scores
// exactly zero. Point 0's kinetic energy is included, which doubles as a
// penalty on command magnitude since its velocity is the command.
template <typename Real>
Real stabilization_loss(const std::vector<rope::RopeStateT<Real>>& trajectory,
                        const rope::RopeParamsT<Real>& params) {
  if (trajectory.empty()) {
    throw EmptyInputError("stabilization loss needs a non-empty trajectory");
  }
  return rope::offset_energy(trajectory.back(), params);
}

// Discount weight of control step t (1-based) on a horizon of T steps:
// gamma^(T-t), so late steps weigh more and the terminal step weighs 1.
inline double tracking_weight(double gamma, int horizon, int t) {
  return std::pow(gamma, horizon - t);
}

// Tracking objective: discounted sum of squared tip-to-target distances over
// the trajectory, target t paired with the state after control step t.
template <typename Real>
Real tracking_loss(const std::vector<rope::RopeStateT<Real>>& trajectory,
                   const TaskSpec& spec, double gamma) {
  if (spec.kind != TaskKind::kTracking) {
    throw KindMismatchError("tracking loss needs a tracking task");
  }
  if (trajectory.empty()) {
    throw EmptyInputError("tracking loss needs a non-empty trajectory");
  }
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw DimensionMismatchError("discount must lie in (0, 1]");
  }
  const int horizon = static_cast<int>(trajectory.size());
  if (static_cast<int>(spec.targets.size()) < horizon) {
    throw DimensionMismatchError("tracking needs one target per control step");
  }
  Real loss(0.0);
  for (int t = 1; t <= horizon; ++t) {
    const auto& tip = trajectory[static_cast<std::size_t>(t - 1)].positions.back();
    const Vec3d& goal = spec.targets[static_cast<std::size_t>(t - 1)];
    Real sq(0.0);
    for (int d = 0; d < 3; ++d) {
      const Real err = tip[d] - Real(goal[d]);
      sq = sq + err * err;
    }
    loss = loss + Real(tracking_weight(gamma, horizon, t)) * sq;
  }
  return loss;
}

}  // namespace spid::control

#endif  // SPID_CONTROL_LOSSES_HPP_

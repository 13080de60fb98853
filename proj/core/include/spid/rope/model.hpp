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

#ifndef SPID_ROPE_MODEL_HPP_
#define SPID_ROPE_MODEL_HPP_

#include <string>
#include <vector>

#include "spid/errors.hpp"
#include "spid/rope/forces.hpp"
#include "spid/rope/geometry.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/state.hpp"

namespace spid::rope {

// One symplectic Euler step under a velocity command for the top point:
// velocities update from current-state accelerations, positions update from
// the new velocities. The top point's velocity is set to the command exactly
// and never integrated, so its acceleration is not evaluated.
template <typename Real>
RopeStateT<Real> step(const RopeStateT<Real>& state, const Vec3T<Real>& control,
                      const RopeParamsT<Real>& params, double dt) {
  const LinkGeometryT<Real> geom = compute_link_geometry(state);
  const ForceArray<Real> forces = total_forces(state, geom, params);
  const int n_points = state.point_count();
  RopeStateT<Real> next;
  next.positions.resize(n_points);
  next.velocities.resize(n_points);
  const Real h(dt);
  next.velocities[0] = control;
  for (int i = 1; i < n_points; ++i) {
    next.velocities[i] = state.velocities[i] + h * (forces[i] / params.masses[i]);
  }
  for (int i = 0; i < n_points; ++i) {
    next.positions[i] = state.positions[i] + h * next.velocities[i];
  }
  for (int i = 0; i < n_points; ++i) {
    if (!vec_finite(next.positions[i]) || !vec_finite(next.velocities[i])) {
      throw NonFiniteError("step produced a non-finite state at point " +
                           std::to_string(i));
    }
  }
  return next;
}

// Holds each command for `substeps` integration steps of length dt and
// returns the state after each command window, in order.
template <typename Real>
std::vector<RopeStateT<Real>> rollout(const RopeStateT<Real>& initial,
                                      const std::vector<Vec3T<Real>>& controls,
                                      const RopeParamsT<Real>& params,
                                      double dt, int substeps) {
  if (substeps < 1) {
    throw DimensionMismatchError("rollout needs at least one substep");
  }
  std::vector<RopeStateT<Real>> out;
  out.reserve(controls.size());
  RopeStateT<Real> current = initial;
  for (const Vec3T<Real>& u : controls) {
    for (int s = 0; s < substeps; ++s) {
      current = step(current, u, params, dt);
    }
    out.push_back(current);
  }
  return out;
}

}  // namespace spid::rope

#endif  // SPID_ROPE_MODEL_HPP_

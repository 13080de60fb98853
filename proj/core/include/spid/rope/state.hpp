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

#ifndef SPID_ROPE_STATE_HPP_
#define SPID_ROPE_STATE_HPP_

#include <vector>

#include "spid/errors.hpp"
#include "spid/vec.hpp"

namespace spid::rope {

// Positions and velocities of the N + 1 mass points. Point 0 is the driven
// top end whose velocity is commanded directly.
template <typename Real>
struct RopeStateT {
  std::vector<Vec3T<Real>> positions;
  std::vector<Vec3T<Real>> velocities;

  int point_count() const { return static_cast<int>(positions.size()); }
};

using RopeState = RopeStateT<double>;

template <typename Real>
void check_state_shape(const RopeStateT<Real>& state) {
  if (state.positions.size() != state.velocities.size() ||
      state.positions.size() < 2) {
    throw DimensionMismatchError(
        "state needs matching position/velocity arrays of at least 2 points");
  }
}

template <typename Real>
RopeStateT<Real> lift_state(const RopeState& s) {
  RopeStateT<Real> out;
  out.positions.reserve(s.positions.size());
  out.velocities.reserve(s.velocities.size());
  for (const Vec3d& p : s.positions) {
    out.positions.push_back(Vec3T<Real>(Real(p[0]), Real(p[1]), Real(p[2])));
  }
  for (const Vec3d& v : s.velocities) {
    out.velocities.push_back(Vec3T<Real>(Real(v[0]), Real(v[1]), Real(v[2])));
  }
  return out;
}

template <typename Real>
RopeState state_values(const RopeStateT<Real>& s) {
  RopeState out;
  out.positions.reserve(s.positions.size());
  out.velocities.reserve(s.velocities.size());
  for (const auto& p : s.positions) out.positions.push_back(value_of(p));
  for (const auto& v : s.velocities) out.velocities.push_back(value_of(v));
  return out;
}

}  // namespace spid::rope

#endif  // SPID_ROPE_STATE_HPP_

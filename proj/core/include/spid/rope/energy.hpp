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

#ifndef SPID_ROPE_ENERGY_HPP_
#define SPID_ROPE_ENERGY_HPP_

#include "spid/rope/geometry.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/state.hpp"

namespace spid::rope {

// Total mechanical energy: gravitational potential (heights measured against
// the gravity direction, so the term is invariant to the horizontal frame),
// kinetic energy of every point including the driven top, and the three
// quadratic elastic terms. The zero of the gravitational term is the world
// origin's equipotential plane.
template <typename Real>
Real rope_energy(const RopeStateT<Real>& state, const RopeParamsT<Real>& params,
                 const LinkGeometryT<Real>& geom) {
  const int n_points = state.point_count();
  const int n = n_points - 1;
  const double g_mag = value_of(norm(params.gravity));
  Real total(0.0);
  if (g_mag > 0.0) {
    const Vec3T<Real> g_hat = params.gravity / Real(g_mag);
    for (int i = 0; i < n_points; ++i) {
      const Real height = -dot(state.positions[i], g_hat);
      total += params.masses[i] * Real(g_mag) * height;
    }
  }
  for (int i = 0; i < n_points; ++i) {
    total += Real(0.5) * params.masses[i] * squared_norm(state.velocities[i]);
  }
  for (int j = 0; j < n - 1; ++j) {
    total += Real(0.5) * params.bending_stiffness[j] * geom.bend_angles[j] *
             geom.bend_angles[j];
  }
  for (int j = 0; j < n; ++j) {
    const Real stretch = geom.lengths[j] - params.rest_lengths[j];
    total += Real(0.5) * params.linear_stiffness[j] * stretch * stretch;
  }
  for (int j = 0; j + 2 < n; ++j) {
    total += Real(0.5) * params.torsion_stiffness[j] * geom.torsion_scales[j] *
             geom.torsion_angles[j] * geom.torsion_angles[j];
  }
  return total;
}

template <typename Real>
Real rope_energy(const RopeStateT<Real>& state,
                 const RopeParamsT<Real>& params) {
  return rope_energy(state, params, compute_link_geometry(state));
}

// Energy of the idealized straight rope hanging at rest lengths below the
// given top point. Elastic terms are zero there by construction, so this is
// purely gravitational.
template <typename Real>
Real rest_energy(const RopeParamsT<Real>& params, const Vec3T<Real>& top) {
  const double g_mag = value_of(norm(params.gravity));
  if (g_mag <= 0.0) return Real(0.0);
  const Vec3T<Real> g_hat = params.gravity / Real(g_mag);
  const Real top_height = -dot(top, g_hat);
  Real total = params.masses[0] * Real(g_mag) * top_height;
  Real depth(0.0);
  for (int j = 0; j < params.link_count(); ++j) {
    depth += params.rest_lengths[j];
    total += params.masses[j + 1] * Real(g_mag) * (top_height - depth);
  }
  return total;
}

// Energy relative to the straight-hanging rest configuration anchored at the
// state's own top point. Zero at rest, positive for any displacement or
// motion, and invariant to translations of the whole rope.
template <typename Real>
Real offset_energy(const RopeStateT<Real>& state,
                   const RopeParamsT<Real>& params) {
  return rope_energy(state, params) - rest_energy(params, state.positions[0]);
}

}  // namespace spid::rope

#endif  // SPID_ROPE_ENERGY_HPP_

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

#ifndef SPID_ROPE_FORCES_HPP_
#define SPID_ROPE_FORCES_HPP_

#include <vector>

#include "spid/rope/geometry.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/state.hpp"
#include "spid/vec.hpp"

// Internal force terms of the damped mass-spring rope. Every function returns
// one force vector per mass point and accumulates element contributions in
// ascending element order, which makes whole-rollout results bit-reproducible
// and cancels internal forces exactly: each element adds a set of vectors
// that sums to zero by construction.

namespace spid::rope {

template <typename Real>
using ForceArray = std::vector<Vec3T<Real>>;

template <typename Real>
ForceArray<Real> zero_forces(int n_points) {
  return ForceArray<Real>(static_cast<std::size_t>(n_points),
                          Vec3T<Real>(Real(0.0), Real(0.0), Real(0.0)));
}

// Stretch springs with collinear viscous damping. Each link j pulls its two
// endpoints together when stretched; the damping term acts on the relative
// velocity component along the link.
template <typename Real>
void accumulate_linear_forces(const RopeStateT<Real>& state,
                              const LinkGeometryT<Real>& geom,
                              const RopeParamsT<Real>& params,
                              ForceArray<Real>& forces) {
  const int n = state.point_count() - 1;
  for (int j = 0; j < n; ++j) {
    const Real stretch = geom.lengths[j] - params.rest_lengths[j];
    const Vec3T<Real> dv = state.velocities[j + 1] - state.velocities[j];
    const Real along = dot(dv, geom.unit_dirs[j]);
    const Real magnitude =
        params.linear_stiffness[j] * stretch + params.linear_damping[j] * along;
    const Vec3T<Real> f = magnitude * geom.unit_dirs[j];
    forces[j] += f;
    forces[j + 1] -= f;
  }
}

// Bend springs. The restoring force on each incident point is the bend angle
// scaled stiffness times the angle gradient; the gradients stored in the
// geometry vanish continuously as an element straightens.
template <typename Real>
void accumulate_bending_forces(const RopeStateT<Real>& state,
                               const LinkGeometryT<Real>& geom,
                               const RopeParamsT<Real>& params,
                               ForceArray<Real>& forces) {
  const int n = state.point_count() - 1;
  for (int j = 0; j < n - 1; ++j) {
    const Real coef = params.bending_stiffness[j] * geom.bend_angles[j];
    const Vec3T<Real>& ga = geom.bend_grad_a[j];
    const Vec3T<Real>& gb = geom.bend_grad_b[j];
    forces[j] += coef * ga;
    forces[j + 1] -= coef * (ga - gb);
    forces[j + 2] -= coef * gb;
  }
}

// Bend-rate damping: identical geometry to the bend spring with the angle
// replaced by its time derivative, so it removes energy at a rate of
// damping * rate^2 per element.
template <typename Real>
void accumulate_bending_damping_forces(const RopeStateT<Real>& state,
                                       const LinkGeometryT<Real>& geom,
                                       const RopeParamsT<Real>& params,
                                       ForceArray<Real>& forces) {
  const int n = state.point_count() - 1;
  for (int j = 0; j < n - 1; ++j) {
    const Real coef = params.bending_damping[j] * geom.bend_rates[j];
    const Vec3T<Real>& ga = geom.bend_grad_a[j];
    const Vec3T<Real>& gb = geom.bend_grad_b[j];
    forces[j] += coef * ga;
    forces[j + 1] -= coef * (ga - gb);
    forces[j + 2] -= coef * gb;
  }
}

// Twist springs. The force is the exact negative gradient of the faded
// quadratic twist energy 1/2 k fade1 fade2 angle^2: the plane angle and the
// fades are rebuilt from the unit link directions and differentiated by a
// mechanical reverse sweep over that formula, then mapped through the
// unit-direction normalization back to the four incident points. Elements
// whose bend planes are too close to degenerate sit inside the fade's dead
// zone and contribute nothing, matching the geometry pass.
template <typename Real>
void accumulate_torsion_forces(const RopeStateT<Real>& state,
                               const LinkGeometryT<Real>& geom,
                               const RopeParamsT<Real>& params,
                               ForceArray<Real>& forces) {
  const int n = state.point_count() - 1;
  for (int j = 0; j + 2 < n; ++j) {
    const Vec3T<Real>& up = geom.unit_dirs[j];
    const Vec3T<Real>& um = geom.unit_dirs[j + 1];
    const Vec3T<Real>& un = geom.unit_dirs[j + 2];
    const Vec3T<Real> b1 = cross(up, um);
    const Vec3T<Real> b2 = cross(um, un);
    const Real nb1 = norm(b1);
    const Real nb2 = norm(b2);
    if (value_of(nb1) <= kTwistFadeLow || value_of(nb2) <= kTwistFadeLow) {
      continue;
    }
    const Vec3T<Real> cr = cross(b1, b2);
    const Real y = dot(cr, um);
    const Real x = dot(b1, b2);
    const Real angle = plane_angle(y, x);
    const Real fade1 = twist_fade(nb1);
    const Real fade2 = twist_fade(nb2);
    const Real stiffness = params.torsion_stiffness[j];

    // Reverse sweep of the element energy 1/2 k fade1 fade2 angle^2:
    // d(energy)/d(y, x) through the folded atan2, d(energy)/d(b1, b2)
    // through the fades and the cross products, then back to the three unit
    // directions.
    const Real scale = stiffness * fade1 * fade2 * angle;
    const Real denom = x * x + y * y;
    const Real gy = scale * (x / denom);
    const Real gx = scale * (-y / denom);
    const Real half_k_sq = Real(0.5) * stiffness * angle * angle;
    const Vec3T<Real> adj_cr = gy * um;
    Vec3T<Real> adj_um = gy * cr;
    const Vec3T<Real> adj_b1 = gx * b2 + cross(b2, adj_cr) +
                               (half_k_sq * fade2 * twist_fade_slope(nb1)) *
                                   (b1 / nb1);
    const Vec3T<Real> adj_b2 = gx * b1 + cross(adj_cr, b1) +
                               (half_k_sq * fade1 * twist_fade_slope(nb2)) *
                                   (b2 / nb2);
    Vec3T<Real> adj_up = cross(um, adj_b1);
    adj_um += cross(adj_b1, up);
    adj_um += cross(un, adj_b2);
    Vec3T<Real> adj_un = cross(adj_b2, um);

    // Through u = l / |l|: adj_l = (adj_u - (adj_u . u) u) / |l|.
    const Vec3T<Real> adj_lp =
        (adj_up - dot(adj_up, up) * up) / geom.lengths[j];
    const Vec3T<Real> adj_lm =
        (adj_um - dot(adj_um, um) * um) / geom.lengths[j + 1];
    const Vec3T<Real> adj_ln =
        (adj_un - dot(adj_un, un) * un) / geom.lengths[j + 2];

    // Link vectors are position differences; forces are minus the energy
    // gradient, so the four contributions telescope to zero.
    forces[j] += adj_lp;
    forces[j + 1] += adj_lm - adj_lp;
    forces[j + 2] += adj_ln - adj_lm;
    forces[j + 3] -= adj_ln;
  }
}

// Gravity and isotropic air drag.
template <typename Real>
void accumulate_external_forces(const RopeStateT<Real>& state,
                                const RopeParamsT<Real>& params,
                                ForceArray<Real>& forces) {
  const int n_points = state.point_count();
  for (int i = 0; i < n_points; ++i) {
    forces[i] += params.masses[i] * params.gravity -
                 params.air_drag * state.velocities[i];
  }
}

template <typename Real>
ForceArray<Real> linear_forces(const RopeStateT<Real>& state,
                               const LinkGeometryT<Real>& geom,
                               const RopeParamsT<Real>& params) {
  ForceArray<Real> f = zero_forces<Real>(state.point_count());
  accumulate_linear_forces(state, geom, params, f);
  return f;
}

template <typename Real>
ForceArray<Real> bending_forces(const RopeStateT<Real>& state,
                                const LinkGeometryT<Real>& geom,
                                const RopeParamsT<Real>& params) {
  ForceArray<Real> f = zero_forces<Real>(state.point_count());
  accumulate_bending_forces(state, geom, params, f);
  return f;
}

template <typename Real>
ForceArray<Real> bending_damping_forces(const RopeStateT<Real>& state,
                                        const LinkGeometryT<Real>& geom,
                                        const RopeParamsT<Real>& params) {
  ForceArray<Real> f = zero_forces<Real>(state.point_count());
  accumulate_bending_damping_forces(state, geom, params, f);
  return f;
}

template <typename Real>
ForceArray<Real> torsion_forces(const RopeStateT<Real>& state,
                                const LinkGeometryT<Real>& geom,
                                const RopeParamsT<Real>& params) {
  ForceArray<Real> f = zero_forces<Real>(state.point_count());
  accumulate_torsion_forces(state, geom, params, f);
  return f;
}

template <typename Real>
ForceArray<Real> external_forces(const RopeStateT<Real>& state,
                                 const RopeParamsT<Real>& params) {
  ForceArray<Real> f = zero_forces<Real>(state.point_count());
  accumulate_external_forces(state, params, f);
  return f;
}

// All five terms in a fixed order.
template <typename Real>
ForceArray<Real> total_forces(const RopeStateT<Real>& state,
                              const LinkGeometryT<Real>& geom,
                              const RopeParamsT<Real>& params) {
  ForceArray<Real> f = zero_forces<Real>(state.point_count());
  accumulate_linear_forces(state, geom, params, f);
  accumulate_bending_forces(state, geom, params, f);
  accumulate_bending_damping_forces(state, geom, params, f);
  accumulate_torsion_forces(state, geom, params, f);
  accumulate_external_forces(state, params, f);
  return f;
}

}  // namespace spid::rope

#endif  // SPID_ROPE_FORCES_HPP_

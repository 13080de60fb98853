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

#ifndef SPID_ROPE_GEOMETRY_HPP_
#define SPID_ROPE_GEOMETRY_HPP_

#include <string>
#include <vector>

#include "spid/errors.hpp"
#include "spid/rope/state.hpp"
#include "spid/vec.hpp"

namespace spid::rope {

// Links shorter than this have no defined direction.
inline constexpr double kLengthEpsilon = 1e-9;

// Below this rejection norm a bend element is treated as exactly straight:
// its angle gradient, rate, and forces are zero.
inline constexpr double kRejectionEpsilon = 1e-12;

// Twist elements fade in with the sines of their adjacent bends (the norms
// of the unit-link binormals). The dihedral gradient carries a 1/sin factor,
// so near-straight triples would otherwise see their plane orientation, and
// with it the twist force, dominated by rounding noise. Below the low mark
// an element is exactly off; above the high mark it acts at full strength.
inline constexpr double kTwistFadeLow = 1e-2;
inline constexpr double kTwistFadeHigh = 1e-1;

// Per-step derived quantities. bend_grad_a[j] and bend_grad_b[j] hold the
// derivative of bend angle j+1 with respect to its lower and upper link
// vectors; both vanish like the rejection does, so every consumer stays
// finite through straight configurations. The identities
//   d(angle)/d(lower link)  = -reject(u_next | u_prev) / |lower|
//   d(angle)/d(upper link)  = -reject(u_prev | u_next) / |upper|
// (unit rejections) are the stable form of the cross-product expressions
// whose numerators vanish like sin of the angle.
template <typename Real>
struct LinkGeometryT {
  std::vector<Vec3T<Real>> link_vectors;  // size N, slot i-1 for link i
  std::vector<Real> lengths;              // size N
  std::vector<Vec3T<Real>> unit_dirs;     // size N
  std::vector<Real> bend_angles;          // size N-1, radians in [0, pi]
  std::vector<Real> bend_rates;           // size N-1, rad/s
  std::vector<Vec3T<Real>> bend_grad_a;   // size N-1
  std::vector<Vec3T<Real>> bend_grad_b;   // size N-1
  std::vector<Real> torsion_angles;       // size N-2, signed plane angle
  std::vector<Real> torsion_scales;       // size N-2, fade factor in [0, 1]
};

using LinkGeometry = LinkGeometryT<double>;

// Cosines can land epsilon outside [-1, 1]; acos must not see that.
inline double clamp_cos(double x) {
  return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}
inline diff::Scalar clamp_cos(const diff::Scalar& x) {
  return diff::clamp(x, -1.0, 1.0);
}

inline double clamp_unit(double x) {
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}
inline diff::Scalar clamp_unit(const diff::Scalar& x) {
  return diff::clamp(x, 0.0, 1.0);
}

// Cubic fade of a twist element in one of its binormal norms: 0 at or below
// the low mark, 1 at or above the high mark, C1 in between.
template <typename Real>
Real twist_fade(const Real& binormal_norm) {
  const Real t = clamp_unit((binormal_norm - Real(kTwistFadeLow)) /
                            Real(kTwistFadeHigh - kTwistFadeLow));
  return t * t * (Real(3.0) - Real(2.0) * t);
}

// Derivative of twist_fade with respect to the binormal norm, written out so
// the force sweep can apply it directly.
template <typename Real>
Real twist_fade_slope(const Real& binormal_norm) {
  const double t_value = (value_of(binormal_norm) - kTwistFadeLow) /
                         (kTwistFadeHigh - kTwistFadeLow);
  if (t_value <= 0.0 || t_value >= 1.0) return Real(0.0);
  const Real t = (binormal_norm - Real(kTwistFadeLow)) /
                 Real(kTwistFadeHigh - kTwistFadeLow);
  return (Real(6.0) * t - Real(6.0) * t * t) /
         Real(kTwistFadeHigh - kTwistFadeLow);
}

// Signed angle between the two bend planes of a link triple, from the
// atan2 components of their binormals. Folded into (-pi/2, pi/2] so that
// antiparallel binormals, which a planar rope produces across an inflection,
// read as zero twist rather than a half turn. The fold only shifts the value
// by a constant, so atan2's partial derivatives carry over unchanged; the
// value jump at a quarter turn sits far from any straightened configuration.
template <typename Real>
Real plane_angle(const Real& y, const Real& x) {
  using std::atan2;
  using diff::atan2;
  if (value_of(x) < 0.0) return atan2(-y, -x);
  return atan2(y, x);
}

template <typename Real>
LinkGeometryT<Real> compute_link_geometry(const RopeStateT<Real>& state) {
  using std::sqrt;
  using std::acos;
  using std::atan2;
  using diff::sqrt;
  using diff::acos;
  using diff::atan2;
  using diff::clamp;
  check_state_shape(state);
  const int n = state.point_count() - 1;
  LinkGeometryT<Real> g;
  g.link_vectors.resize(n);
  g.lengths.resize(n);
  g.unit_dirs.resize(n);

  for (int j = 0; j < n; ++j) {
    g.link_vectors[j] = state.positions[j + 1] - state.positions[j];
    if (!vec_finite(g.link_vectors[j])) {
      throw NonFiniteError("link " + std::to_string(j + 1) +
                           " has a non-finite endpoint");
    }
    g.lengths[j] = norm(g.link_vectors[j]);
    if (!(value_of(g.lengths[j]) > kLengthEpsilon)) {
      throw DegenerateLinkError("link " + std::to_string(j + 1) +
                                " has near-zero length");
    }
    g.unit_dirs[j] = g.link_vectors[j] / g.lengths[j];
  }

  g.bend_angles.resize(n - 1);
  g.bend_rates.resize(n - 1);
  g.bend_grad_a.resize(n - 1);
  g.bend_grad_b.resize(n - 1);
  for (int j = 0; j < n - 1; ++j) {
    const Vec3T<Real>& ua = g.unit_dirs[j];
    const Vec3T<Real>& ub = g.unit_dirs[j + 1];
    const Real d = dot(ua, ub);
    g.bend_angles[j] = acos(clamp_cos(d));
    const Vec3T<Real> rej_a = ub - d * ua;  // component of ub off ua
    const Vec3T<Real> rej_b = ua - d * ub;  // component of ua off ub
    const Real na = norm(rej_a);
    const Real nb = norm(rej_b);
    if (value_of(na) < kRejectionEpsilon || value_of(nb) < kRejectionEpsilon) {
      g.bend_grad_a[j] = Vec3T<Real>(Real(0.0), Real(0.0), Real(0.0));
      g.bend_grad_b[j] = Vec3T<Real>(Real(0.0), Real(0.0), Real(0.0));
      g.bend_rates[j] = Real(0.0);
      continue;
    }
    g.bend_grad_a[j] = -(rej_a / na) / g.lengths[j];
    g.bend_grad_b[j] = -(rej_b / nb) / g.lengths[j + 1];
    const Vec3T<Real> dva = state.velocities[j + 1] - state.velocities[j];
    const Vec3T<Real> dvb = state.velocities[j + 2] - state.velocities[j + 1];
    g.bend_rates[j] = dot(dva, g.bend_grad_a[j]) + dot(dvb, g.bend_grad_b[j]);
  }

  g.torsion_angles.resize(n >= 2 ? n - 2 : 0);
  g.torsion_scales.resize(n >= 2 ? n - 2 : 0);
  for (int j = 0; j + 2 < n; ++j) {
    const Vec3T<Real> b1 = cross(g.unit_dirs[j], g.unit_dirs[j + 1]);
    const Vec3T<Real> b2 = cross(g.unit_dirs[j + 1], g.unit_dirs[j + 2]);
    const Real nb1 = norm(b1);
    const Real nb2 = norm(b2);
    if (value_of(nb1) <= kTwistFadeLow || value_of(nb2) <= kTwistFadeLow) {
      g.torsion_angles[j] = Real(0.0);
      g.torsion_scales[j] = Real(0.0);
      continue;
    }
    const Real y = dot(cross(b1, b2), g.unit_dirs[j + 1]);
    const Real x = dot(b1, b2);
    g.torsion_angles[j] = plane_angle(y, x);
    g.torsion_scales[j] = twist_fade(nb1) * twist_fade(nb2);
  }
  return g;
}

}  // namespace spid::rope

#endif  // SPID_ROPE_GEOMETRY_HPP_

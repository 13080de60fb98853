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

#ifndef SPID_ROPE_PARAMS_HPP_
#define SPID_ROPE_PARAMS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "spid/errors.hpp"
#include "spid/vec.hpp"

namespace spid::rope {

// Physical description of a rope discretized into N + 1 mass points joined by
// N links. Index conventions used throughout:
//   points          0..N
//   links           1..N   (link i joins points i-1 and i); arrays store
//                          link i at slot i-1
//   bend elements   1..N-1 (element i couples links i and i+1, i.e. points
//                          i-1, i, i+1); arrays store element i at slot i-1
//   twist elements  2..N-1 (element i couples links i-1, i, i+1, i.e. points
//                          i-2..i+1); arrays store element i at slot i-2
template <typename Real>
struct RopeParamsT {
  std::vector<Real> masses;             // kg, size N+1
  std::vector<Real> rest_lengths;       // m, size N
  Vec3T<Real> gravity;                  // m/s^2, world frame
  Real air_drag;                        // N s/m, isotropic per-point drag
  std::vector<Real> linear_stiffness;   // N/m, size N
  std::vector<Real> linear_damping;     // N s/m, size N
  std::vector<Real> bending_stiffness;  // N m/rad, size N-1
  std::vector<Real> bending_damping;    // N m s/rad, size N-1
  std::vector<Real> torsion_stiffness;  // N m/rad, size N-2

  int link_count() const { return static_cast<int>(rest_lengths.size()); }
  int point_count() const { return link_count() + 1; }
};

using RopeParams = RopeParamsT<double>;

// Checks array sizes against the point count and sign constraints on every
// entry. Throws DimensionMismatchError, NonFiniteError, or a generic
// InvalidParams error.
inline void validate(const RopeParams& p) {
  const std::size_t n_points = p.masses.size();
  if (n_points < 2) {
    throw DimensionMismatchError("rope needs at least two mass points");
  }
  const std::size_t n = n_points - 1;
  auto expect = [](std::size_t got, std::size_t want, const char* name) {
    if (got != want) {
      throw DimensionMismatchError(std::string(name) +
                                   ": expected " + std::to_string(want) +
                                   " entries, got " + std::to_string(got));
    }
  };
  expect(p.rest_lengths.size(), n, "rest_lengths");
  expect(p.linear_stiffness.size(), n, "linear_stiffness");
  expect(p.linear_damping.size(), n, "linear_damping");
  expect(p.bending_stiffness.size(), n - 1, "bending_stiffness");
  expect(p.bending_damping.size(), n - 1, "bending_damping");
  expect(p.torsion_stiffness.size(), n >= 2 ? n - 2 : 0, "torsion_stiffness");

  auto all_finite = [](const std::vector<double>& xs) {
    for (double x : xs) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  if (!all_finite(p.masses) || !all_finite(p.rest_lengths) ||
      !all_finite(p.linear_stiffness) || !all_finite(p.linear_damping) ||
      !all_finite(p.bending_stiffness) || !all_finite(p.bending_damping) ||
      !all_finite(p.torsion_stiffness) || !vec_finite(p.gravity) ||
      !std::isfinite(p.air_drag)) {
    throw NonFiniteError("rope params contain a non-finite entry");
  }
  auto all_positive = [](const std::vector<double>& xs) {
    for (double x : xs) {
      if (!(x > 0.0)) return false;
    }
    return true;
  };
  auto all_nonneg = [](const std::vector<double>& xs) {
    for (double x : xs) {
      if (x < 0.0) return false;
    }
    return true;
  };
  if (!all_positive(p.masses)) {
    throw Error("InvalidParams", "masses must be positive");
  }
  if (!all_positive(p.rest_lengths)) {
    throw Error("InvalidParams", "rest lengths must be positive");
  }
  if (!all_nonneg(p.linear_stiffness) || !all_nonneg(p.linear_damping) ||
      !all_nonneg(p.bending_stiffness) || !all_nonneg(p.bending_damping) ||
      !all_nonneg(p.torsion_stiffness) || p.air_drag < 0.0) {
    throw Error("InvalidParams",
                "stiffness and damping entries must be non-negative");
  }
}

// Element-wise conversion, used to lift plain parameters into a recording
// context as untracked constants.
template <typename Real>
RopeParamsT<Real> lift_params(const RopeParams& p) {
  RopeParamsT<Real> out;
  auto conv = [](const std::vector<double>& xs) {
    std::vector<Real> ys;
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(Real(x));
    return ys;
  };
  out.masses = conv(p.masses);
  out.rest_lengths = conv(p.rest_lengths);
  out.gravity = Vec3T<Real>(Real(p.gravity[0]), Real(p.gravity[1]),
                            Real(p.gravity[2]));
  out.air_drag = Real(p.air_drag);
  out.linear_stiffness = conv(p.linear_stiffness);
  out.linear_damping = conv(p.linear_damping);
  out.bending_stiffness = conv(p.bending_stiffness);
  out.bending_damping = conv(p.bending_damping);
  out.torsion_stiffness = conv(p.torsion_stiffness);
  return out;
}

}  // namespace spid::rope

#endif  // SPID_ROPE_PARAMS_HPP_

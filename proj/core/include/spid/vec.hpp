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

#ifndef SPID_VEC_HPP_
#define SPID_VEC_HPP_

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "spid/diff/scalar.hpp"

namespace spid {

template <typename Real>
using Vec3T = Eigen::Matrix<Real, 3, 1>;

using Vec3d = Eigen::Vector3d;
using Vec2d = Eigen::Vector2d;

// Vector primitives are routed through these free functions so the recording
// scalar can fuse each one into a single tape node while plain doubles take
// the ordinary Eigen path.

template <typename Real>
inline Real dot(const Vec3T<Real>& a, const Vec3T<Real>& b) {
  return a.dot(b);
}

inline diff::Scalar dot(const Vec3T<diff::Scalar>& a,
                        const Vec3T<diff::Scalar>& b) {
  return diff::dot(std::span<const diff::Scalar>(a.data(), 3),
                   std::span<const diff::Scalar>(b.data(), 3));
}

template <typename Real>
inline Vec3T<Real> cross(const Vec3T<Real>& a, const Vec3T<Real>& b) {
  return a.cross(b);
}

inline Vec3T<diff::Scalar> cross(const Vec3T<diff::Scalar>& a,
                                 const Vec3T<diff::Scalar>& b) {
  using diff::Op;
  using diff::Scalar;
  Vec3T<Scalar> out;
  diff::Tape* t = nullptr;
  for (int i = 0; i < 3 && t == nullptr; ++i) {
    t = a[i].tape != nullptr ? a[i].tape : b[i].tape;
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    const double v = a[j].v * b[k].v - a[k].v * b[j].v;
    if (t == nullptr) {
      out[i] = Scalar(v);
      continue;
    }
    diff::Tape::Builder node(*t);
    node.arg(a[j].idx, b[k].v);
    node.arg(b[k].idx, a[j].v);
    node.arg(a[k].idx, -b[j].v);
    node.arg(b[j].idx, -a[k].v);
    out[i] = Scalar(v, node.finish(Op::kCross), t);
  }
  return out;
}

template <typename Real>
inline Real squared_norm(const Vec3T<Real>& a) {
  return dot(a, a);
}

template <typename Real>
inline Real norm(const Vec3T<Real>& a) {
  using std::sqrt;
  using diff::sqrt;
  return sqrt(squared_norm(a));
}

inline double value_of(double x) { return x; }
inline double value_of(const diff::Scalar& x) { return x.v; }

template <typename Real>
inline bool vec_finite(const Vec3T<Real>& a) {
  return std::isfinite(value_of(a[0])) && std::isfinite(value_of(a[1])) &&
         std::isfinite(value_of(a[2]));
}

template <typename Real>
inline Vec3d value_of(const Vec3T<Real>& a) {
  return Vec3d(value_of(a[0]), value_of(a[1]), value_of(a[2]));
}

}  // namespace spid

#endif  // SPID_VEC_HPP_

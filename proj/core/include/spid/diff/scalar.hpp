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

#ifndef SPID_DIFF_SCALAR_HPP_
#define SPID_DIFF_SCALAR_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include <Eigen/Core>

#include "spid/diff/tape.hpp"

namespace spid::diff {

// Recording scalar. Values are carried alongside the node index so the
// forward pass needs no tape lookups; plain doubles enter expressions as
// untracked constants (idx < 0, tape == nullptr).
//
// Branch conditions compare values only and are never recorded: a clamp or a
// guard has zero derivative on its clamped side, and finite-difference checks
// are expected to stay clear of branch points.
struct Scalar {
  double v = 0.0;
  std::int32_t idx = -1;
  Tape* tape = nullptr;

  Scalar() = default;
  Scalar(double value) : v(value) {}  // NOLINT: implicit constants by design
  Scalar(double value, std::int32_t index, Tape* t)
      : v(value), idx(index), tape(t) {}

  bool tracked() const { return idx >= 0; }
};

inline Scalar make_leaf(Tape& tape, double value) {
  return Scalar(value, tape.leaf(), &tape);
}

namespace internal {

inline Tape* join(const Scalar& a, const Scalar& b) {
  if (a.tape != nullptr && b.tape != nullptr && a.tape != b.tape) {
    throw DimensionMismatchError("operands belong to different tapes");
  }
  return a.tape != nullptr ? a.tape : b.tape;
}

}  // namespace internal

inline Scalar operator+(const Scalar& a, const Scalar& b) {
  Tape* t = internal::join(a, b);
  const double v = a.v + b.v;
  if (t == nullptr) return Scalar(v);
  return Scalar(v, t->binary(Op::kAdd, a.idx, 1.0, b.idx, 1.0), t);
}

inline Scalar operator-(const Scalar& a, const Scalar& b) {
  Tape* t = internal::join(a, b);
  const double v = a.v - b.v;
  if (t == nullptr) return Scalar(v);
  return Scalar(v, t->binary(Op::kSub, a.idx, 1.0, b.idx, -1.0), t);
}

inline Scalar operator*(const Scalar& a, const Scalar& b) {
  Tape* t = internal::join(a, b);
  const double v = a.v * b.v;
  if (t == nullptr) return Scalar(v);
  return Scalar(v, t->binary(Op::kMul, a.idx, b.v, b.idx, a.v), t);
}

inline Scalar operator/(const Scalar& a, const Scalar& b) {
  Tape* t = internal::join(a, b);
  const double v = a.v / b.v;
  if (t == nullptr) return Scalar(v);
  const double inv = 1.0 / b.v;
  return Scalar(v, t->binary(Op::kDiv, a.idx, inv, b.idx, -v * inv), t);
}

inline Scalar operator-(const Scalar& a) {
  if (a.tape == nullptr) return Scalar(-a.v);
  return Scalar(-a.v, a.tape->unary(Op::kNeg, a.idx, -1.0), a.tape);
}

inline Scalar operator+(const Scalar& a) { return a; }

inline Scalar& operator+=(Scalar& a, const Scalar& b) { return a = a + b; }
inline Scalar& operator-=(Scalar& a, const Scalar& b) { return a = a - b; }
inline Scalar& operator*=(Scalar& a, const Scalar& b) { return a = a * b; }
inline Scalar& operator/=(Scalar& a, const Scalar& b) { return a = a / b; }

inline bool operator<(const Scalar& a, const Scalar& b) { return a.v < b.v; }
inline bool operator>(const Scalar& a, const Scalar& b) { return a.v > b.v; }
inline bool operator<=(const Scalar& a, const Scalar& b) { return a.v <= b.v; }
inline bool operator>=(const Scalar& a, const Scalar& b) { return a.v >= b.v; }
inline bool operator==(const Scalar& a, const Scalar& b) { return a.v == b.v; }
inline bool operator!=(const Scalar& a, const Scalar& b) { return a.v != b.v; }

inline Scalar sqrt(const Scalar& a) {
  const double v = std::sqrt(a.v);
  if (a.tape == nullptr) return Scalar(v);
  // d/dx sqrt(x) = 1/(2 sqrt(x)); call sites guard the origin explicitly.
  return Scalar(v, a.tape->unary(Op::kSqrt, a.idx, 0.5 / v), a.tape);
}

inline Scalar exp(const Scalar& a) {
  const double v = std::exp(a.v);
  if (a.tape == nullptr) return Scalar(v);
  return Scalar(v, a.tape->unary(Op::kExp, a.idx, v), a.tape);
}

inline Scalar log(const Scalar& a) {
  const double v = std::log(a.v);
  if (a.tape == nullptr) return Scalar(v);
  return Scalar(v, a.tape->unary(Op::kLog, a.idx, 1.0 / a.v), a.tape);
}

inline Scalar tanh(const Scalar& a) {
  const double v = std::tanh(a.v);
  if (a.tape == nullptr) return Scalar(v);
  return Scalar(v, a.tape->unary(Op::kTanh, a.idx, 1.0 - v * v), a.tape);
}

inline Scalar abs(const Scalar& a) {
  const double v = std::abs(a.v);
  if (a.tape == nullptr) return Scalar(v);
  return Scalar(v, a.tape->unary(Op::kNeg, a.idx, a.v < 0.0 ? -1.0 : 1.0),
                a.tape);
}

// Inverse cosine with a guarded local partial. The true derivative diverges
// at |x| = 1; straight rope segments evaluate exactly there, so the partial
// is capped to keep adjoints finite. Products of the form angle * partial
// still converge to the correct limit as the bend opens.
inline Scalar acos(const Scalar& a) {
  const double v = std::acos(a.v);
  if (a.tape == nullptr) return Scalar(v);
  const double s2 = std::max(1.0 - a.v * a.v, 1e-24);
  return Scalar(v, a.tape->unary(Op::kAcos, a.idx, -1.0 / std::sqrt(s2)),
                a.tape);
}

inline Scalar atan2(const Scalar& y, const Scalar& x) {
  Tape* t = internal::join(y, x);
  const double v = std::atan2(y.v, x.v);
  if (t == nullptr) return Scalar(v);
  const double d = x.v * x.v + y.v * y.v;
  return Scalar(v, t->binary(Op::kAtan2, y.idx, x.v / d, x.idx, -y.v / d), t);
}

// Clamp against plain bounds. Zero derivative outside [lo, hi].
inline Scalar clamp(const Scalar& a, double lo, double hi) {
  const double v = a.v < lo ? lo : (a.v > hi ? hi : a.v);
  if (a.tape == nullptr) return Scalar(v);
  const double pass = (a.v >= lo && a.v <= hi) ? 1.0 : 0.0;
  return Scalar(v, a.tape->unary(Op::kClamp, a.idx, pass), a.tape);
}

inline Scalar min(const Scalar& a, const Scalar& b) { return a.v <= b.v ? a : b; }
inline Scalar max(const Scalar& a, const Scalar& b) { return a.v >= b.v ? a : b; }

inline bool isfinite(const Scalar& a) { return std::isfinite(a.v); }

// Inner product recorded as one node: d/da_i = b_i, d/db_i = a_i.
inline Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatchError("dot operands differ in length");
  }
  Tape* t = nullptr;
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    v += a[i].v * b[i].v;
    if (t == nullptr) t = internal::join(a[i], b[i]);
  }
  if (t == nullptr) return Scalar(v);
  Tape::Builder node(*t);
  for (std::size_t i = 0; i < a.size(); ++i) node.arg(a[i].idx, b[i].v);
  for (std::size_t i = 0; i < a.size(); ++i) node.arg(b[i].idx, a[i].v);
  return Scalar(v, node.finish(Op::kDot), t);
}

// sum_i w_i x_i + b recorded as one node; the workhorse of dense layers.
inline Scalar affine(std::span<const Scalar> w, std::span<const Scalar> x,
                     const Scalar& b) {
  if (w.size() != x.size()) {
    throw DimensionMismatchError("affine operands differ in length");
  }
  Tape* t = b.tape;
  double v = b.v;
  for (std::size_t i = 0; i < w.size(); ++i) {
    v += w[i].v * x[i].v;
    if (t == nullptr) t = internal::join(w[i], x[i]);
  }
  if (t == nullptr) return Scalar(v);
  Tape::Builder node(*t);
  for (std::size_t i = 0; i < w.size(); ++i) node.arg(w[i].idx, x[i].v);
  for (std::size_t i = 0; i < w.size(); ++i) node.arg(x[i].idx, w[i].v);
  node.arg(b.idx, 1.0);
  return Scalar(v, node.finish(Op::kAffine), t);
}

inline Scalar sum(std::span<const Scalar> xs) {
  Tape* t = nullptr;
  double v = 0.0;
  for (const Scalar& x : xs) {
    v += x.v;
    if (t == nullptr) t = x.tape;
  }
  if (t == nullptr) return Scalar(v);
  Tape::Builder node(*t);
  for (const Scalar& x : xs) {
    if (x.tape != nullptr && x.tape != t) {
      throw DimensionMismatchError("operands belong to different tapes");
    }
    node.arg(x.idx, 1.0);
  }
  return Scalar(v, node.finish(Op::kSum), t);
}

// Plain-double twins of the fused primitives, with the same summation order,
// so code templated on the scalar type compiles and agrees on both paths.
inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatchError("dot operands differ in length");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * b[i];
  return v;
}

inline double affine(std::span<const double> w, std::span<const double> x,
                     double b) {
  if (w.size() != x.size()) {
    throw DimensionMismatchError("affine operands differ in length");
  }
  double v = b;
  for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * x[i];
  return v;
}

inline double sum(std::span<const double> xs) {
  double v = 0.0;
  for (double x : xs) v += x;
  return v;
}

}  // namespace spid::diff

namespace Eigen {

template <>
struct NumTraits<spid::diff::Scalar> : NumTraits<double> {
  typedef spid::diff::Scalar Real;
  typedef spid::diff::Scalar NonInteger;
  typedef spid::diff::Scalar Nested;
  typedef spid::diff::Scalar Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3,
  };
  static inline Real epsilon() {
    return Real(std::numeric_limits<double>::epsilon());
  }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() {
    return Real(std::numeric_limits<double>::max());
  }
  static inline Real lowest() {
    return Real(-std::numeric_limits<double>::max());
  }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<spid::diff::Scalar, double, BinaryOp> {
  typedef spid::diff::Scalar ReturnType;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, spid::diff::Scalar, BinaryOp> {
  typedef spid::diff::Scalar ReturnType;
};

}  // namespace Eigen

#endif  // SPID_DIFF_SCALAR_HPP_

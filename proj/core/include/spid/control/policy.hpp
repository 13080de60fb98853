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

#ifndef SPID_CONTROL_POLICY_HPP_
#define SPID_CONTROL_POLICY_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "spid/diff/scalar.hpp"
#include "spid/errors.hpp"
#include "spid/rng.hpp"
#include "spid/rope/state.hpp"
#include "spid/vec.hpp"

namespace spid::control {

enum class TaskKind { kStabilization, kTracking };

// Tracking features include the current target plus this many upcoming ones.
inline constexpr int kTrackingLookahead = 40;

// Keeps the squashing scale finite when the raw network output is zero.
inline constexpr double kSquashEpsilon = 1e-24;

// What the controller is asked to do. Tracking carries one tip target per
// control step; stabilization needs no extra data.
struct TaskSpec {
  TaskKind kind = TaskKind::kStabilization;
  std::vector<Vec3d> targets;
};

inline int task_feature_width(TaskKind kind) {
  return kind == TaskKind::kTracking ? 3 * (1 + kTrackingLookahead) : 0;
}

// Fully connected tanh network emitting a 3-D velocity command. Weights are
// stored flat so training can treat them as a single leaf vector: per layer,
// the row-major (out x in) weight matrix followed by the out biases.
struct PolicyWeights {
  std::vector<int> dims;
  Eigen::VectorXd values;
  double command_bound = 1.0;   // m/s, smooth saturation level
  bool zero_vertical = false;   // project out the gravity axis before squash
  Vec3d gravity_dir = Vec3d(0.0, 0.0, -1.0);  // unit vector

  int layer_count() const { return static_cast<int>(dims.size()) - 1; }

  int parameter_count() const {
    int count = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      count += dims[l + 1] * (dims[l] + 1);
    }
    return count;
  }

  void validate() const {
    if (dims.size() < 2) {
      throw DimensionMismatchError("policy needs at least input and output dims");
    }
    for (int d : dims) {
      if (d < 1) throw DimensionMismatchError("policy layer width must be >= 1");
    }
    if (dims.back() != 3) {
      throw DimensionMismatchError("policy output width must be 3");
    }
    if (values.size() != parameter_count()) {
      throw DimensionMismatchError("policy value vector does not match dims");
    }
    if (!values.allFinite()) {
      throw NonFiniteError("policy weights are not finite");
    }
    const double len = gravity_dir.norm();
    if (!(std::abs(len - 1.0) < 1e-9)) {
      throw DimensionMismatchError("policy gravity direction must be unit length");
    }
  }
};

// Fresh network for the given task: 3 hidden tanh layers of 128 units, hidden
// weights Glorot-uniform from the seed, final layer all zero so the untrained
// policy outputs exactly (0, 0, 0) and behaves as the passive controller.
inline PolicyWeights make_policy(int state_feature_width, TaskKind kind,
                                 double command_bound, std::uint64_t seed,
                                 const Vec3d& gravity = Vec3d(0.0, 0.0, -9.81)) {
  if (state_feature_width < 1) {
    throw DimensionMismatchError("state feature width must be >= 1");
  }
  if (!(command_bound > 0.0)) {
    throw DimensionMismatchError("command bound must be positive");
  }
  const double g_len = gravity.norm();
  if (!(g_len > 0.0)) {
    throw DimensionMismatchError("gravity direction is undefined for zero gravity");
  }
  PolicyWeights net;
  net.dims = {state_feature_width + task_feature_width(kind), 128, 128, 128, 3};
  net.command_bound = command_bound;
  net.zero_vertical = kind == TaskKind::kStabilization;
  net.gravity_dir = gravity / g_len;
  net.values = Eigen::VectorXd::Zero(net.parameter_count());

  std::mt19937_64 rng(seed);
  int offset = 0;
  for (int l = 0; l + 1 < static_cast<int>(net.dims.size()); ++l) {
    const int in = net.dims[static_cast<std::size_t>(l)];
    const int out = net.dims[static_cast<std::size_t>(l) + 1];
    const bool last = l + 2 == static_cast<int>(net.dims.size());
    if (!last) {
      const double a = std::sqrt(6.0 / static_cast<double>(in + out));
      for (int i = 0; i < out * in; ++i) {
        net.values[offset + i] = uniform_double(rng, -a, a);
      }
    }
    offset += out * (in + 1);  // biases stay zero on every layer
  }
  return net;
}

// State features: every point position relative to the top point, then every
// point velocity. Width 6(N+1); the first three entries are identically zero,
// which keeps the layout uniform. Relative positions make the controller
// translation invariant, matching the physics.
template <typename Real>
void append_state_features(const rope::RopeStateT<Real>& state,
                           std::vector<Real>& out) {
  const int n_points = state.point_count();
  out.reserve(out.size() + static_cast<std::size_t>(6 * n_points));
  for (int i = 0; i < n_points; ++i) {
    for (int d = 0; d < 3; ++d) {
      out.push_back(state.positions[i][d] - state.positions[0][d]);
    }
  }
  for (int i = 0; i < n_points; ++i) {
    for (int d = 0; d < 3; ++d) out.push_back(state.velocities[i][d]);
  }
}

// Full feature vector for one control step. Tracking appends the current and
// next kTrackingLookahead targets relative to the top point, repeating the
// final target once the trajectory runs out.
template <typename Real>
std::vector<Real> policy_features(const rope::RopeStateT<Real>& state,
                                  const TaskSpec& spec, int step) {
  std::vector<Real> out;
  append_state_features(state, out);
  if (spec.kind == TaskKind::kTracking) {
    if (spec.targets.empty()) {
      throw DimensionMismatchError("tracking spec has no targets");
    }
    if (step < 0) throw IndexOutOfRangeError("negative control step");
    const int last = static_cast<int>(spec.targets.size()) - 1;
    for (int j = 0; j <= kTrackingLookahead; ++j) {
      const int t = std::min(step + j, last);
      const Vec3d& g = spec.targets[static_cast<std::size_t>(t)];
      for (int d = 0; d < 3; ++d) {
        out.push_back(Real(g[d]) - state.positions[0][d]);
      }
    }
  }
  return out;
}

// Network forward pass over an explicit flat weight vector, which during
// training is the tape's leaf prefix. The raw 3-vector is optionally
// projected off the gravity axis, then smoothly saturated:
//   u = raw * bound * tanh(|raw| / bound) / |raw|,
// so |u| < bound in exact arithmetic (within a few ulps of it after rounding
// at full saturation) and u ~ raw for small outputs. A zero raw vector maps
// to exactly zero.
template <typename Real>
Vec3T<Real> policy_apply(const PolicyWeights& net,
                         std::span<const Real> flat_weights,
                         std::span<const Real> features) {
  using std::sqrt;
  using std::tanh;
  using diff::sqrt;
  using diff::tanh;
  if (static_cast<int>(flat_weights.size()) != net.parameter_count()) {
    throw DimensionMismatchError("flat weight vector does not match policy dims");
  }
  if (static_cast<int>(features.size()) != net.dims.front()) {
    throw DimensionMismatchError("feature width does not match policy input");
  }

  std::vector<Real> act(features.begin(), features.end());
  std::vector<Real> next;
  int offset = 0;
  const int layers = net.layer_count();
  for (int l = 0; l < layers; ++l) {
    const int in = net.dims[static_cast<std::size_t>(l)];
    const int out = net.dims[static_cast<std::size_t>(l) + 1];
    const Real* w = flat_weights.data() + offset;
    const Real* b = flat_weights.data() + offset + out * in;
    next.assign(static_cast<std::size_t>(out), Real(0.0));
    for (int o = 0; o < out; ++o) {
      const Real pre = diff::affine(
          std::span<const Real>(w + o * in, static_cast<std::size_t>(in)),
          std::span<const Real>(act.data(), static_cast<std::size_t>(in)),
          b[o]);
      next[static_cast<std::size_t>(o)] = l + 1 < layers ? tanh(pre) : pre;
    }
    act.swap(next);
    offset += out * (in + 1);
  }

  Vec3T<Real> raw;
  for (int d = 0; d < 3; ++d) raw[d] = act[static_cast<std::size_t>(d)];
  if (net.zero_vertical) {
    // Projection before squashing keeps the output exactly orthogonal to
    // gravity: the squash only rescales the vector.
    Real along = raw[0] * Real(net.gravity_dir[0]);
    along = along + raw[1] * Real(net.gravity_dir[1]);
    along = along + raw[2] * Real(net.gravity_dir[2]);
    for (int d = 0; d < 3; ++d) raw[d] = raw[d] - along * Real(net.gravity_dir[d]);
  }
  Real sq = raw[0] * raw[0];
  sq = sq + raw[1] * raw[1];
  sq = sq + raw[2] * raw[2];
  const Real n = sqrt(sq + Real(kSquashEpsilon));
  const Real bound(net.command_bound);
  const Real scale = bound * tanh(n / bound) / n;
  Vec3T<Real> u;
  for (int d = 0; d < 3; ++d) u[d] = raw[d] * scale;
  return u;
}

// Plain-double forward pass on prebuilt features.
inline Vec3d policy_forward(std::span<const double> features,
                            const PolicyWeights& net) {
  return policy_apply<double>(
      net, std::span<const double>(net.values.data(),
                                   static_cast<std::size_t>(net.values.size())),
      features);
}

// Plain-double forward pass from a state and its task context.
inline Vec3d policy_forward(const rope::RopeState& state, const TaskSpec& spec,
                            int step, const PolicyWeights& net) {
  const std::vector<double> features = policy_features<double>(state, spec, step);
  return policy_forward(std::span<const double>(features), net);
}

}  // namespace spid::control

#endif  // SPID_CONTROL_POLICY_HPP_

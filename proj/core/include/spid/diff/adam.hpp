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

#ifndef SPID_DIFF_ADAM_HPP_
#define SPID_DIFF_ADAM_HPP_

#include <cmath>

#include <Eigen/Core>

#include "spid/errors.hpp"

namespace spid::diff {

// Adam optimizer state. Moment buffers are sized on first use and the update
// uses bias correction, so the very first step moves each coordinate by
// roughly learning_rate in the direction opposing its gradient sign.
struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step_count = 0;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
};

inline void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
                      AdamState& state) {
  if (params.size() != grads.size()) {
    throw DimensionMismatchError("adam: params and grads differ in length");
  }
  if (state.m.size() == 0) {
    state.m = Eigen::VectorXd::Zero(params.size());
    state.v = Eigen::VectorXd::Zero(params.size());
  }
  if (state.m.size() != params.size()) {
    throw DimensionMismatchError("adam: state does not match params length");
  }
  state.step_count += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double correction1 =
      1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double correction2 =
      1.0 - std::pow(b2, static_cast<double>(state.step_count));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    if (!std::isfinite(g)) {
      throw NonFiniteError("adam: non-finite gradient component");
    }
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double mhat = state.m[i] / correction1;
    const double vhat = state.v[i] / correction2;
    params[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

}  // namespace spid::diff

#endif  // SPID_DIFF_ADAM_HPP_

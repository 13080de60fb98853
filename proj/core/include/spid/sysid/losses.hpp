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

#ifndef SPID_SYSID_LOSSES_HPP_
#define SPID_SYSID_LOSSES_HPP_

#include <cmath>
#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "spid/errors.hpp"
#include "spid/rope/state.hpp"

namespace spid::sysid {

// Mean over samples 1..horizon of the squared Euclidean norm of the stacked
// position error. Index 0 of both sequences is the shared initial sample and
// is excluded from the sum.
inline double position_loss(std::span<const Eigen::VectorXd> predicted,
                            std::span<const Eigen::VectorXd> measured,
                            int horizon) {
  if (horizon < 1) {
    throw DimensionMismatchError("position loss needs a horizon of at least 1");
  }
  const std::size_t needed = static_cast<std::size_t>(horizon) + 1;
  if (predicted.size() < needed || measured.size() < needed) {
    throw DimensionMismatchError(
        "position sequences do not cover the requested horizon");
  }
  double total = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const Eigen::VectorXd& a = predicted[static_cast<std::size_t>(t)];
    const Eigen::VectorXd& b = measured[static_cast<std::size_t>(t)];
    if (a.size() != b.size()) {
      throw DimensionMismatchError("position samples differ in width");
    }
    total += (a - b).squaredNorm();
  }
  return total / static_cast<double>(horizon);
}

// Root mean squared Euclidean distance between the last node's positions of
// two equally long trajectories.
inline double rmse_tip(std::span<const rope::RopeState> predicted,
                       std::span<const rope::RopeState> reference) {
  if (predicted.size() != reference.size()) {
    throw DimensionMismatchError("trajectories differ in length");
  }
  if (predicted.empty()) {
    throw EmptyInputError("tip error of an empty trajectory is undefined");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < predicted.size(); ++t) {
    if (predicted[t].positions.size() != reference[t].positions.size()) {
      throw DimensionMismatchError("trajectories differ in node count");
    }
    total += (predicted[t].positions.back() - reference[t].positions.back())
                 .squaredNorm();
  }
  return std::sqrt(total / static_cast<double>(predicted.size()));
}

}  // namespace spid::sysid

#endif  // SPID_SYSID_LOSSES_HPP_

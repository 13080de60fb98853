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

#ifndef SPID_DIFF_VALUE_AND_GRAD_HPP_
#define SPID_DIFF_VALUE_AND_GRAD_HPP_

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "spid/diff/scalar.hpp"
#include "spid/diff/tape.hpp"

namespace spid::diff {

// Records `program` applied to the given leaf values on a fresh tape and
// returns the scalar result together with its gradient. The program receives
// one recording Scalar per leaf and must return a Scalar owned by the same
// tape (a constant result yields a zero gradient).
template <typename Program>
std::pair<double, Eigen::VectorXd> value_and_grad(
    Program&& program, const Eigen::VectorXd& leaf_values) {
  Tape tape;
  std::vector<Scalar> leaves;
  leaves.reserve(static_cast<std::size_t>(leaf_values.size()));
  for (Eigen::Index i = 0; i < leaf_values.size(); ++i) {
    leaves.push_back(make_leaf(tape, leaf_values[i]));
  }
  const Scalar out = program(std::span<const Scalar>(leaves));
  if (!std::isfinite(out.v)) {
    throw NonFiniteError("value_and_grad: program produced a non-finite value");
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(leaf_values.size());
  if (out.tracked()) {
    if (out.tape != &tape) {
      throw DimensionMismatchError(
          "value_and_grad: program result lives on a foreign tape");
    }
    std::vector<double> adjoints(static_cast<std::size_t>(tape.size()), 0.0);
    adjoints[static_cast<std::size_t>(out.idx)] = 1.0;
    tape.backward(adjoints);
    bool finite = true;
    for (Eigen::Index i = 0; i < leaf_values.size(); ++i) {
      grad[i] = adjoints[static_cast<std::size_t>(leaves[i].idx)];
      finite = finite && std::isfinite(grad[i]);
    }
    if (!finite) {
      std::fill(adjoints.begin(), adjoints.end(), 0.0);
      adjoints[static_cast<std::size_t>(out.idx)] = 1.0;
      tape.diagnose_nonfinite(adjoints);
      throw NonFiniteError("value_and_grad: non-finite gradient");
    }
  }
  return {out.v, std::move(grad)};
}

}  // namespace spid::diff

#endif  // SPID_DIFF_VALUE_AND_GRAD_HPP_

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

#include "spid/diff/tape.hpp"

#include <cmath>

namespace spid::diff {

const char* op_name(Op op) {
  switch (op) {
    case Op::kLeaf:
      return "leaf";
    case Op::kAdd:
      return "add";
    case Op::kSub:
      return "sub";
    case Op::kMul:
      return "mul";
    case Op::kDiv:
      return "div";
    case Op::kNeg:
      return "neg";
    case Op::kSqrt:
      return "sqrt";
    case Op::kExp:
      return "exp";
    case Op::kLog:
      return "log";
    case Op::kTanh:
      return "tanh";
    case Op::kAcos:
      return "acos";
    case Op::kAtan2:
      return "atan2";
    case Op::kClamp:
      return "clamp";
    case Op::kDot:
      return "dot";
    case Op::kCross:
      return "cross";
    case Op::kAffine:
      return "affine";
    case Op::kSum:
      return "sum";
  }
  throw UnregisteredPrimitiveError("unknown tape operation id");
}

void Tape::diagnose_nonfinite(std::span<double> adjoints) const {
  if (adjoints.size() != nodes_.size()) {
    throw DimensionMismatchError(
        "adjoint buffer size does not match tape size");
  }
  for (std::int32_t i = size() - 1; i >= 0; --i) {
    const double a = adjoints[static_cast<std::size_t>(i)];
    if (a == 0.0) continue;
    const TapeNode& n = nodes_[static_cast<std::size_t>(i)];
    const std::uint32_t end = n.arg_begin + n.arg_count;
    for (std::uint32_t k = n.arg_begin; k < end; ++k) {
      const double update = partials_[k] * a;
      const std::size_t target = static_cast<std::size_t>(args_[k]);
      const bool was_finite = std::isfinite(adjoints[target]);
      adjoints[target] += update;
      if (was_finite && !std::isfinite(adjoints[target])) {
        throw NonFiniteError(std::string("non-finite adjoint produced by '") +
                             op_name(n.op) + "' node");
      }
    }
  }
}

}  // namespace spid::diff

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

#ifndef SPID_DIFF_TAPE_HPP_
#define SPID_DIFF_TAPE_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spid/errors.hpp"

namespace spid::diff {

// Operation tags. Stored per node purely for diagnostics: the reverse sweep
// needs only argument indices and pre-evaluated local partials.
enum class Op : std::uint8_t {
  kLeaf = 0,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kSqrt,
  kExp,
  kLog,
  kTanh,
  kAcos,
  kAtan2,
  kClamp,
  kDot,
  kCross,
  kAffine,
  kSum,
};

const char* op_name(Op op);

// Record of a single scalar result. Arguments and local partials live in the
// tape's side arrays at [arg_begin, arg_begin + arg_count).
struct TapeNode {
  std::uint32_t arg_begin;
  std::uint16_t arg_count;
  Op op;
};
static_assert(sizeof(TapeNode) == 8);

// Append-only record of one differentiable evaluation. Local partials are
// evaluated eagerly at record time, so the reverse sweep is a single pass of
// multiply-accumulates in strict reverse recording order. A tape is confined
// to one execution context; independent tapes may run concurrently.
class Tape {
 public:
  Tape() { reset(); }

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  std::int32_t size() const { return static_cast<std::int32_t>(nodes_.size()); }

  // Registers an input node. Its adjoint is read back after backward().
  std::int32_t leaf() {
    nodes_.push_back({arg_top(), 0, Op::kLeaf});
    return size() - 1;
  }

  std::int32_t unary(Op op, std::int32_t a, double pa) {
    const std::uint32_t begin = arg_top();
    if (a >= 0) {
      args_.push_back(a);
      partials_.push_back(pa);
    }
    nodes_.push_back({begin, static_cast<std::uint16_t>(arg_top() - begin), op});
    return size() - 1;
  }

  std::int32_t binary(Op op, std::int32_t a, double pa, std::int32_t b,
                      double pb) {
    const std::uint32_t begin = arg_top();
    if (a >= 0) {
      args_.push_back(a);
      partials_.push_back(pa);
    }
    if (b >= 0) {
      args_.push_back(b);
      partials_.push_back(pb);
    }
    nodes_.push_back({begin, static_cast<std::uint16_t>(arg_top() - begin), op});
    return size() - 1;
  }

  // n-ary node: pairs of (argument index, local partial). Entries with a
  // negative index denote constants and are dropped.
  class Builder {
   public:
    explicit Builder(Tape& tape) : tape_(tape), begin_(tape.arg_top()) {}
    void arg(std::int32_t idx, double partial) {
      if (idx >= 0) {
        tape_.args_.push_back(idx);
        tape_.partials_.push_back(partial);
      }
    }
    std::int32_t finish(Op op) {
      tape_.nodes_.push_back(
          {begin_, static_cast<std::uint16_t>(tape_.arg_top() - begin_), op});
      return tape_.size() - 1;
    }

   private:
    Tape& tape_;
    std::uint32_t begin_;
  };

  // Discards everything, including marked leaves.
  void reset() {
    nodes_.clear();
    args_.clear();
    partials_.clear();
    leaf_prefix_nodes_ = 0;
    leaf_prefix_args_ = 0;
  }

  // Freezes the current prefix (typically parameter leaves) so that
  // reset_to_leaf_prefix() can truncate repeatedly recorded segments while
  // keeping leaf indices stable across segments.
  void mark_leaf_prefix() {
    leaf_prefix_nodes_ = nodes_.size();
    leaf_prefix_args_ = args_.size();
  }

  void reset_to_leaf_prefix() {
    nodes_.resize(leaf_prefix_nodes_);
    args_.resize(leaf_prefix_args_);
    partials_.resize(leaf_prefix_args_);
  }

  // Reverse sweep. `adjoints` must be zero-initialized with one entry per
  // node and seeded by the caller before the call (typically adjoints[output]
  // = 1). On return, adjoints[i] holds d(seeded outputs)/d(node i).
  void backward(std::span<double> adjoints) const {
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
        adjoints[static_cast<std::size_t>(args_[k])] += partials_[k] * a;
      }
    }
  }

  // Slow variant used only to produce a good message after a failed sweep:
  // reruns the sweep and reports the first node whose adjoint turns
  // non-finite.
  void diagnose_nonfinite(std::span<double> adjoints) const;

  std::size_t node_bytes() const {
    return nodes_.size() * sizeof(TapeNode) + args_.size() * sizeof(int32_t) +
           partials_.size() * sizeof(double);
  }

  Op node_op(std::int32_t idx) const {
    return nodes_[static_cast<std::size_t>(idx)].op;
  }

 private:
  std::uint32_t arg_top() const {
    return static_cast<std::uint32_t>(args_.size());
  }

  std::vector<TapeNode> nodes_;
  std::vector<std::int32_t> args_;
  std::vector<double> partials_;
  std::size_t leaf_prefix_nodes_ = 0;
  std::size_t leaf_prefix_args_ = 0;
};

}  // namespace spid::diff

#endif  // SPID_DIFF_TAPE_HPP_

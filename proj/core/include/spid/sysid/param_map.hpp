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

#ifndef SPID_SYSID_PARAM_MAP_HPP_
#define SPID_SYSID_PARAM_MAP_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spid/diff/scalar.hpp"
#include "spid/errors.hpp"
#include "spid/rope/params.hpp"

namespace spid::sysid {

// How one parameter group enters the optimization: held at its base value,
// shared as a single trainable scalar broadcast over the group, or trainable
// per element.
enum class Binding { kFixed, kTied, kFree };

// Base values below this floor are lifted to it before scaling, so a zeroed
// group can still enter log-space optimization.
inline constexpr double kLogFloor = 1e-12;

// Binds selected groups of rope parameters to a flat trainable vector.
// Each leaf is a log-space multiplicative offset from the base value
// (value = base * exp(leaf)), which keeps every optimizer step inside the
// positive orthant without projections, and makes a zero leaf vector
// reproduce `base` bit for bit: starting the optimizer at the exact
// generating parameters yields an exactly zero loss and gradient, hence an
// exact fixed point. Masses, rest lengths, and gravity always come from
// `base`: they are directly measurable and never optimized here.
//
// kTied shares one offset across the whole group (a common scale factor);
// homogeneous fits should tie the base values first (tie_parameters) so the
// shared factor acts on a uniform group.
//
// Leaf layout is fixed: air_drag, linear_stiffness, linear_damping,
// bending_stiffness, bending_damping, torsion_stiffness, each contributing
// 0 (fixed), 1 (tied), or group-size (free) slots in that order.
struct ParamMap {
  rope::RopeParams base;
  Binding air_drag = Binding::kFixed;
  Binding linear_stiffness = Binding::kFixed;
  Binding linear_damping = Binding::kFixed;
  Binding bending_stiffness = Binding::kFixed;
  Binding bending_damping = Binding::kFixed;
  Binding torsion_stiffness = Binding::kFixed;

  int leaf_count() const {
    int count = 0;
    visit([&](Binding b, const std::vector<double>& values, const char*) {
      count += slots(b, values.size());
    });
    return count;
  }

  // Offsets describing the current base values: all zeros by construction.
  Eigen::VectorXd pack() const {
    return Eigen::VectorXd::Zero(leaf_count());
  }

  // Folds the offsets into the base values (base *= exp(rho) groupwise), so
  // a later pack() restarts from zero at the updated parameters.
  void unpack(const Eigen::VectorXd& rho) {
    if (rho.size() != leaf_count()) {
      throw DimensionMismatchError("leaf vector does not match the binding");
    }
    int at = 0;
    visit_mutable([&](Binding b, std::vector<double>& values) {
      if (b == Binding::kTied) {
        const double factor = std::exp(rho[at++]);
        for (double& entry : values) entry = lift(entry) * factor;
      } else if (b == Binding::kFree) {
        for (double& entry : values) entry = lift(entry) * std::exp(rho[at++]);
      }
    });
  }

  // One diagnostic name per leaf, matching the pack/unpack layout.
  std::vector<std::string> leaf_names() const {
    std::vector<std::string> names;
    visit([&](Binding b, const std::vector<double>& values, const char* tag) {
      if (b == Binding::kTied) {
        names.push_back(std::string(tag) + "[all]");
      } else if (b == Binding::kFree) {
        for (std::size_t i = 0; i < values.size(); ++i) {
          names.push_back(std::string(tag) + "[" + std::to_string(i) + "]");
        }
      }
    });
    return names;
  }

  // Parameters as a function of the leaves; Real = double evaluates plainly,
  // Real = diff::Scalar records exp nodes on the leaves' tape.
  template <typename Real>
  rope::RopeParamsT<Real> instantiate(std::span<const Real> leaves) const {
    using std::exp;
    using diff::exp;
    if (static_cast<int>(leaves.size()) != leaf_count()) {
      throw DimensionMismatchError("leaf vector does not match the binding");
    }
    rope::RopeParamsT<Real> out = rope::lift_params<Real>(base);
    int at = 0;
    auto fill = [&](Binding b, const std::vector<double>& from,
                    std::vector<Real>& values) {
      if (b == Binding::kTied) {
        const Real factor = exp(leaves[at++]);
        for (std::size_t i = 0; i < values.size(); ++i) {
          values[i] = Real(lift(from[i])) * factor;
        }
      } else if (b == Binding::kFree) {
        for (std::size_t i = 0; i < values.size(); ++i) {
          values[i] = Real(lift(from[i])) * exp(leaves[at++]);
        }
      }
    };
    if (air_drag == Binding::kTied || air_drag == Binding::kFree) {
      out.air_drag = Real(lift(base.air_drag)) * exp(leaves[at++]);
    }
    fill(linear_stiffness, base.linear_stiffness, out.linear_stiffness);
    fill(linear_damping, base.linear_damping, out.linear_damping);
    fill(bending_stiffness, base.bending_stiffness, out.bending_stiffness);
    fill(bending_damping, base.bending_damping, out.bending_damping);
    fill(torsion_stiffness, base.torsion_stiffness, out.torsion_stiffness);
    return out;
  }

 private:
  static int slots(Binding b, std::size_t group_size) {
    switch (b) {
      case Binding::kFixed: return 0;
      case Binding::kTied: return 1;
      case Binding::kFree: return static_cast<int>(group_size);
    }
    return 0;
  }

  static double lift(double v) { return v < kLogFloor ? kLogFloor : v; }

  template <typename Fn>
  void visit(Fn&& fn) const {
    const std::vector<double> drag = {base.air_drag};
    fn(air_drag, drag, "air_drag");
    fn(linear_stiffness, base.linear_stiffness, "linear_stiffness");
    fn(linear_damping, base.linear_damping, "linear_damping");
    fn(bending_stiffness, base.bending_stiffness, "bending_stiffness");
    fn(bending_damping, base.bending_damping, "bending_damping");
    fn(torsion_stiffness, base.torsion_stiffness, "torsion_stiffness");
  }

  template <typename Fn>
  void visit_mutable(Fn&& fn) {
    std::vector<double> drag = {base.air_drag};
    fn(air_drag, drag);
    base.air_drag = drag[0];
    fn(linear_stiffness, base.linear_stiffness);
    fn(linear_damping, base.linear_damping);
    fn(bending_stiffness, base.bending_stiffness);
    fn(bending_damping, base.bending_damping);
    fn(torsion_stiffness, base.torsion_stiffness);
  }
};

// Replaces every optimizable per-element array (stiffnesses, dampings) by
// its mean broadcast over the array, turning the rope into a homogeneous
// model. Masses, rest lengths, gravity, and the scalar air drag are left
// untouched. Which entries train as one shared scalar is expressed by a
// ParamMap with Binding::kTied, not by the values themselves.
inline rope::RopeParams tie_parameters(const rope::RopeParams& params) {
  rope::RopeParams out = params;
  auto broadcast_mean = [](std::vector<double>& values) {
    if (values.empty()) return;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    for (double& v : values) v = mean;
  };
  broadcast_mean(out.linear_stiffness);
  broadcast_mean(out.linear_damping);
  broadcast_mean(out.bending_stiffness);
  broadcast_mean(out.bending_damping);
  broadcast_mean(out.torsion_stiffness);
  return out;
}

// Inverse marking of tie_parameters: every entry trains independently.
// Values are unchanged; per-element freedom is expressed by a ParamMap with
// Binding::kFree.
inline rope::RopeParams untie_parameters(const rope::RopeParams& params) {
  return params;
}

}  // namespace spid::sysid

#endif  // SPID_SYSID_PARAM_MAP_HPP_

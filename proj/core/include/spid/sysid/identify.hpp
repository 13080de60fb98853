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

#ifndef SPID_SYSID_IDENTIFY_HPP_
#define SPID_SYSID_IDENTIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spid/diff/adam.hpp"
#include "spid/errors.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/rollout_grad.hpp"
#include "spid/rope/state.hpp"
#include "spid/sysid/dataset.hpp"
#include "spid/sysid/param_map.hpp"
#include "spid/vec.hpp"

namespace spid::sysid {

// Identification curriculum stage: homogeneous ties each stiffness/damping
// array to one shared trainable scalar; heterogeneous trains every entry.
enum class Stage { kHomogeneous, kHeterogeneous };

struct SysIdConfig {
  int initial_horizon = 10;      // samples fitted before the first growth
  int horizon_increment = 10;    // samples added whenever the loss dips below
                                 // the threshold
  double integration_dt = 1e-3;  // s; the sample interval must be an integer
                                 // multiple of this
  double loss_threshold = 1e-4;  // m^2, horizon growth trigger
  double learning_rate = 1e-2;
  int max_iterations = 2000;
  Stage stage = Stage::kHeterogeneous;
  // Once the horizon covers the whole dataset, stop when the loss improves
  // by less than stall_tolerance (relative) over stall_window iterations.
  double stall_tolerance = 1e-6;
  int stall_window = 50;
};

struct IdentifyLogEntry {
  int iteration = 0;
  int horizon = 0;  // samples fitted this iteration
  double loss = 0.0;
};

struct IdentifyResult {
  rope::RopeParams params;
  std::vector<IdentifyLogEntry> log;
};

// Integration steps per recorded sample. Throws ConfigError unless the
// sample interval is a (numerically exact) positive integer multiple of the
// integration step.
inline int substeps_per_sample(double sample_dt, double integration_dt) {
  if (!(integration_dt > 0.0) || !std::isfinite(integration_dt)) {
    throw ConfigError("integration step must be positive and finite");
  }
  const double ratio = sample_dt / integration_dt;
  const long long substeps = std::llround(ratio);
  if (substeps < 1 ||
      std::abs(static_cast<double>(substeps) * integration_dt - sample_dt) >
          1e-9 * sample_dt) {
    throw ConfigError(
        "sample interval must be an integer multiple of the integration step");
  }
  return static_cast<int>(substeps);
}

// Trainable-group binding for a curriculum stage. Masses, rest lengths, and
// gravity stay fixed at their measured values in either stage.
inline ParamMap make_stage_map(const rope::RopeParams& params, Stage stage) {
  ParamMap map;
  map.base = stage == Stage::kHomogeneous ? tie_parameters(params) : params;
  const Binding binding =
      stage == Stage::kHomogeneous ? Binding::kTied : Binding::kFree;
  map.air_drag = binding;
  map.linear_stiffness = binding;
  map.linear_damping = binding;
  map.bending_stiffness = binding;
  map.bending_damping = binding;
  map.torsion_stiffness = binding;
  return map;
}

// Order-of-magnitude seed for the homogeneous stage when nothing is known
// about the rope's material: link stiffness 10 N/m, all dampings 0.1, air
// drag 0.01, small positive bending/torsion stiffness. Masses, rest lengths,
// and gravity are copied from `measured` (they come from direct
// measurement).
inline rope::RopeParams stage_one_init(const rope::RopeParams& measured) {
  rope::RopeParams out = measured;
  std::fill(out.linear_stiffness.begin(), out.linear_stiffness.end(), 10.0);
  std::fill(out.linear_damping.begin(), out.linear_damping.end(), 0.1);
  std::fill(out.bending_stiffness.begin(), out.bending_stiffness.end(), 0.01);
  std::fill(out.bending_damping.begin(), out.bending_damping.end(), 0.1);
  std::fill(out.torsion_stiffness.begin(), out.torsion_stiffness.end(), 0.01);
  out.air_drag = 0.01;
  return out;
}

namespace internal {

// Rollout program for the identification objective: controls replay the
// recorded commands, and each sample contributes its squared stacked
// position error scaled by 1/horizon.
struct SysIdProgram {
  const ParamMap* map = nullptr;
  const SysIdDataset* data = nullptr;
  int horizon = 0;

  template <typename Real>
  struct Instance {
    rope::RopeParamsT<Real> params;
    const SysIdProgram* owner;

    Vec3T<Real> control(const rope::RopeStateT<Real>&, int k) const {
      const Vec3d& u = owner->data->controls[static_cast<std::size_t>(k)];
      return Vec3T<Real>(Real(u[0]), Real(u[1]), Real(u[2]));
    }

    Real step_loss(const rope::RopeStateT<Real>& state, int k) const {
      const Eigen::VectorXd& measured =
          owner->data->positions[static_cast<std::size_t>(k) + 1];
      Real sq(0.0);
      for (std::size_t i = 0; i < state.positions.size(); ++i) {
        for (int d = 0; d < 3; ++d) {
          const Real err =
              state.positions[i][d] -
              Real(measured[static_cast<Eigen::Index>(3 * i) + d]);
          sq = sq + err * err;
        }
      }
      return sq * Real(1.0 / static_cast<double>(owner->horizon));
    }
  };

  template <typename Real>
  Instance<Real> instantiate(std::span<const Real> leaves) const {
    return Instance<Real>{map->instantiate<Real>(leaves), this};
  }
};

}  // namespace internal

// Fits the groups bound by `map` to the recorded motion. Each iteration
// replays the dataset's commands over the current horizon, measures the mean
// squared stacked position error, and takes one Adam step in log-space; the
// horizon grows by horizon_increment whenever the loss falls below
// loss_threshold. After the horizon covers the whole dataset, iteration
// continues until the relative improvement over stall_window iterations
// drops below stall_tolerance or max_iterations is reached. Throws
// DivergedError (reporting iteration and horizon) if the loss or gradient
// leaves the finite range.
inline IdentifyResult identify(const SysIdDataset& data, const ParamMap& map,
                               const SysIdConfig& config) {
  data.validate();
  rope::validate(map.base);
  const int total = data.sample_steps();
  if (map.base.point_count() != data.point_count()) {
    throw DimensionMismatchError(
        "model point count does not match the dataset");
  }
  if (config.initial_horizon < 1 || config.initial_horizon > total) {
    throw ConfigError("initial horizon must lie in [1, sample count]");
  }
  if (config.horizon_increment < 1) {
    throw ConfigError("horizon increment must be at least 1");
  }
  if (!(config.loss_threshold > 0.0)) {
    throw ConfigError("loss threshold must be positive");
  }
  if (!(config.learning_rate > 0.0) || config.max_iterations < 1) {
    throw ConfigError("learning rate and iteration budget must be positive");
  }
  if (config.stall_window < 1 || !(config.stall_tolerance > 0.0)) {
    throw ConfigError("stall rule needs a positive window and tolerance");
  }
  const int substeps = substeps_per_sample(data.sample_dt, config.integration_dt);

  const rope::RopeState start = initial_state(data);
  ParamMap fitted = map;
  Eigen::VectorXd rho = fitted.pack();
  diff::AdamState adam;
  adam.learning_rate = config.learning_rate;

  IdentifyResult result;
  int horizon = config.initial_horizon;
  std::deque<double> full_horizon_losses;
  for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
    const int effective = std::min(horizon, total);
    const internal::SysIdProgram program{&fitted, &data, effective};
    rope::RolloutGradResult rolled;
    try {
      rolled = rope::rollout_gradient(program, start, rho, effective,
                                      config.integration_dt, substeps);
    } catch (const NonFiniteError& error) {
      throw DivergedError("identification diverged at iteration " +
                          std::to_string(iteration) + ", horizon " +
                          std::to_string(effective) + ": " + error.what());
    }
    result.log.push_back({iteration, effective, rolled.loss});
    diff::adam_step(rho, rolled.gradient, adam);
    if (rolled.loss < config.loss_threshold && horizon <= total) {
      horizon += config.horizon_increment;
    }
    if (horizon > total && effective == total) {
      full_horizon_losses.push_back(rolled.loss);
      const std::size_t span = static_cast<std::size_t>(config.stall_window) + 1;
      if (full_horizon_losses.size() > span) full_horizon_losses.pop_front();
      if (full_horizon_losses.size() == span) {
        const double first = full_horizon_losses.front();
        const double last = full_horizon_losses.back();
        const double relative =
            (first - last) / std::max(std::abs(first), 1e-300);
        if (relative < config.stall_tolerance) break;
      }
    }
  }
  fitted.unpack(rho);
  result.params = fitted.base;
  return result;
}

// Stage-driven convenience: binds groups per config.stage (tying values for
// the homogeneous stage) and fits starting from params_init.
inline IdentifyResult identify(const SysIdDataset& data,
                               const rope::RopeParams& params_init,
                               const SysIdConfig& config) {
  return identify(data, make_stage_map(params_init, config.stage), config);
}

}  // namespace spid::sysid

#endif  // SPID_SYSID_IDENTIFY_HPP_

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

#ifndef SPID_CONTROL_TRAIN_HPP_
#define SPID_CONTROL_TRAIN_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "spid/control/losses.hpp"
#include "spid/control/policy.hpp"
#include "spid/diff/adam.hpp"
#include "spid/errors.hpp"
#include "spid/rng.hpp"
#include "spid/rope/energy.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/rollout_grad.hpp"
#include "spid/rope/state.hpp"

namespace spid::control {

// Physics parameters stay strictly positive after noise injection.
inline constexpr double kPositivityFloor = 1e-12;

// Relative standard deviations of the Gaussian parameter noise, one per
// physics parameter group; 0 disables noise for that group.
struct NoiseScales {
  double air_drag = 0.0;
  double linear_stiffness = 0.0;
  double linear_damping = 0.0;
  double bending_stiffness = 0.0;
  double bending_damping = 0.0;
  double torsion_stiffness = 0.0;
};

// Training hyperparameters. One control step holds the command for
// `control_substeps` integration steps of length `dt`, so the control period
// is dt * control_substeps and the rollout spans horizon * that.
struct TrainConfig {
  int batch_size = 4;        // rollouts per iteration (K)
  int horizon = 600;         // control steps per rollout (T)
  double dt = 1e-3;          // integration step, seconds
  int control_substeps = 10; // integration steps per control step
  double discount = 0.99;    // tracking emphasis on late steps
  NoiseScales noise;
  double learning_rate = 1e-3;
  // The step size decays geometrically to learning_rate * lr_final_fraction
  // over the run; 1 keeps it constant. Converged policies destabilize under a
  // fixed large step, so long runs want a fraction well below 1.
  double lr_final_fraction = 1.0;
  int iterations = 200;
  double command_bound = 1.0;  // m/s
  std::uint64_t seed = 0;

  void validate() const {
    if (batch_size < 1) throw DimensionMismatchError("batch size must be >= 1");
    if (horizon < 1) throw DimensionMismatchError("horizon must be >= 1");
    if (!(dt > 0.0)) throw DimensionMismatchError("dt must be positive");
    if (control_substeps < 1) {
      throw DimensionMismatchError("control substeps must be >= 1");
    }
    if (!(discount > 0.0) || discount > 1.0) {
      throw DimensionMismatchError("discount must lie in (0, 1]");
    }
    if (!(command_bound > 0.0)) {
      throw DimensionMismatchError("command bound must be positive");
    }
    if (!(lr_final_fraction > 0.0) || lr_final_fraction > 1.0) {
      throw DimensionMismatchError("lr final fraction must lie in (0, 1]");
    }
  }
};

// Pool of initial states and their tasks, sampled by weight each iteration.
// The out-of-distribution loop appends boosted entries to this pool.
struct TrainingSet {
  std::vector<rope::RopeState> states;
  std::vector<TaskSpec> specs;
  std::vector<double> weights;

  void validate() const {
    if (states.empty()) throw EmptyInputError("training set has no states");
    if (specs.size() != states.size() || weights.size() != states.size()) {
      throw DimensionMismatchError("training set columns differ in length");
    }
    for (double w : weights) {
      if (!(w > 0.0)) throw DimensionMismatchError("sampling weights must be positive");
    }
  }
};

inline TrainingSet make_training_set(std::vector<rope::RopeState> states,
                                     TaskSpec spec) {
  TrainingSet set;
  set.weights.assign(states.size(), 1.0);
  set.specs.assign(states.size(), std::move(spec));
  set.states = std::move(states);
  return set;
}

// Parameter sets with zero-mean Gaussian offsets applied, one per batch
// element. Each component's standard deviation is the group scale times the
// component's magnitude, and results are projected back to positivity. The
// draw order is fixed, so a seed fully determines the output.
inline std::vector<rope::RopeParams> sample_param_noise(
    const rope::RopeParams& params, const NoiseScales& scales,
    std::uint64_t seed, int count) {
  if (count < 0) throw DimensionMismatchError("sample count must be >= 0");
  auto nonneg = [](double s, const char* name) {
    if (s < 0.0) {
      throw DimensionMismatchError(std::string("noise scale must be >= 0: ") + name);
    }
  };
  nonneg(scales.air_drag, "air_drag");
  nonneg(scales.linear_stiffness, "linear_stiffness");
  nonneg(scales.linear_damping, "linear_damping");
  nonneg(scales.bending_stiffness, "bending_stiffness");
  nonneg(scales.bending_damping, "bending_damping");
  nonneg(scales.torsion_stiffness, "torsion_stiffness");

  std::mt19937_64 rng(seed);
  auto perturb = [&rng](double value, double scale) {
    if (scale == 0.0) return value;
    const double noised = value + normal_double(rng) * scale * std::abs(value);
    return noised < kPositivityFloor ? kPositivityFloor : noised;
  };
  std::vector<rope::RopeParams> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    rope::RopeParams p = params;
    p.air_drag = perturb(p.air_drag, scales.air_drag);
    for (double& v : p.linear_stiffness) v = perturb(v, scales.linear_stiffness);
    for (double& v : p.linear_damping) v = perturb(v, scales.linear_damping);
    for (double& v : p.bending_stiffness) v = perturb(v, scales.bending_stiffness);
    for (double& v : p.bending_damping) v = perturb(v, scales.bending_damping);
    for (double& v : p.torsion_stiffness) v = perturb(v, scales.torsion_stiffness);
    out.push_back(std::move(p));
  }
  return out;
}

// Training-data augmentation: each state is translated so its top point sits
// at the origin, spun about the gravity axis at uniform increments covering a
// full turn (velocities rotated along), and replicated at every offset of the
// translation grid. An empty grid means a single copy at the origin.
inline std::vector<rope::RopeState> augment_states(
    const std::vector<rope::RopeState>& states, int rotation_count,
    const std::vector<Vec3d>& translation_grid,
    const Vec3d& gravity_axis = Vec3d(0.0, 0.0, 1.0)) {
  if (rotation_count < 1) {
    throw DimensionMismatchError("rotation count must be >= 1");
  }
  const double axis_len = gravity_axis.norm();
  if (!(axis_len > 0.0)) {
    throw DimensionMismatchError("gravity axis is undefined");
  }
  const Vec3d axis = gravity_axis / axis_len;
  static const std::vector<Vec3d> kOriginOnly = {Vec3d::Zero()};
  const std::vector<Vec3d>& grid =
      translation_grid.empty() ? kOriginOnly : translation_grid;

  std::vector<rope::RopeState> out;
  out.reserve(states.size() * static_cast<std::size_t>(rotation_count) *
              grid.size());
  for (const rope::RopeState& base : states) {
    rope::check_state_shape(base);
    const Vec3d top = base.positions[0];
    for (int r = 0; r < rotation_count; ++r) {
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>(r) / rotation_count;
      const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
      rope::RopeState turned;
      turned.positions.reserve(base.positions.size());
      turned.velocities.reserve(base.velocities.size());
      for (std::size_t i = 0; i < base.positions.size(); ++i) {
        turned.positions.push_back(rot * (base.positions[i] - top));
        turned.velocities.push_back(rot * base.velocities[i]);
      }
      for (const Vec3d& offset : grid) {
        rope::RopeState placed = turned;
        for (Vec3d& p : placed.positions) p += offset;
        out.push_back(std::move(placed));
      }
    }
  }
  return out;
}

namespace internal {

// Rollout program whose leaves are the flat policy weights. The physics
// parameters are baked in as constants, so the gradient flows only through
// the controller.
struct PolicyProgram {
  const PolicyWeights* net = nullptr;
  const TaskSpec* spec = nullptr;
  const rope::RopeParams* physics = nullptr;
  int horizon = 0;
  double discount = 1.0;

  template <typename Real>
  struct Instance {
    rope::RopeParamsT<Real> params;
    const PolicyProgram* owner;
    std::span<const Real> weights;

    Vec3T<Real> control(const rope::RopeStateT<Real>& state, int k) const {
      const std::vector<Real> features =
          policy_features<Real>(state, *owner->spec, k);
      return policy_apply<Real>(*owner->net, weights,
                                std::span<const Real>(features));
    }

    Real step_loss(const rope::RopeStateT<Real>& state, int k) const {
      if (owner->spec->kind == TaskKind::kStabilization) {
        if (k + 1 < owner->horizon) return Real(0.0);
        return rope::offset_energy(state, params);
      }
      const Vec3d& goal = owner->spec->targets[static_cast<std::size_t>(k)];
      const auto& tip = state.positions.back();
      Real sq(0.0);
      for (int d = 0; d < 3; ++d) {
        const Real err = tip[d] - Real(goal[d]);
        sq = sq + err * err;
      }
      return Real(tracking_weight(owner->discount, owner->horizon, k + 1)) * sq;
    }
  };

  template <typename Real>
  Instance<Real> instantiate(std::span<const Real> leaves) const {
    return Instance<Real>{rope::lift_params<Real>(*physics), this, leaves};
  }
};

// Weighted draw from the training set: cumulative sums plus one uniform.
inline std::size_t weighted_index(const std::vector<double>& weights,
                                  std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform_double(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace internal

struct TrainResult {
  PolicyWeights weights;
  std::vector<double> losses;  // batch loss per iteration, index 0 first
};

// One training iteration's batch loss and gradient with respect to the flat
// policy weights: K weighted draws from the pool, K noisy parameter sets, K
// differentiated rollouts, reduced in ascending batch order.
inline double batch_loss_and_gradient(const TrainingSet& data,
                                      const std::vector<std::size_t>& picks,
                                      const std::vector<rope::RopeParams>& models,
                                      const PolicyWeights& net,
                                      const TrainConfig& config,
                                      Eigen::VectorXd& gradient) {
  gradient = Eigen::VectorXd::Zero(net.values.size());
  double loss = 0.0;
  for (std::size_t k = 0; k < picks.size(); ++k) {
    internal::PolicyProgram program;
    program.net = &net;
    program.spec = &data.specs[picks[k]];
    program.physics = &models[k];
    program.horizon = config.horizon;
    program.discount = config.discount;
    const rope::RolloutGradResult r =
        rope::rollout_gradient(program, data.states[picks[k]], net.values,
                               config.horizon, config.dt, config.control_substeps);
    loss += r.loss;
    gradient += r.gradient;
  }
  const double scale = 1.0 / static_cast<double>(picks.size());
  loss *= scale;
  gradient *= scale;
  return loss;
}

// Self-supervised training by backpropagation through rollouts: per
// iteration, draw a batch of initial states and tasks by weight, perturb the
// physics with fresh Gaussian noise, roll the current policy out through each
// perturbed model, and take one Adam step on the averaged task loss.
// Starts from the supplied weights, so refinement continues where a previous
// run stopped.
inline TrainResult train(const TrainingSet& data, const rope::RopeParams& params,
                         const TrainConfig& config, PolicyWeights initial) {
  config.validate();
  data.validate();
  rope::validate(params);
  initial.validate();
  for (std::size_t i = 0; i < data.states.size(); ++i) {
    const int width = 6 * data.states[i].point_count() +
                      task_feature_width(data.specs[i].kind);
    if (width != initial.dims.front()) {
      throw DimensionMismatchError("training state width does not match policy");
    }
    if (data.specs[i].kind == TaskKind::kTracking &&
        static_cast<int>(data.specs[i].targets.size()) < config.horizon) {
      throw DimensionMismatchError("tracking spec shorter than the horizon");
    }
  }

  std::mt19937_64 rng(config.seed);
  diff::AdamState adam;
  adam.learning_rate = config.learning_rate;

  TrainResult result;
  result.weights = std::move(initial);
  result.losses.reserve(static_cast<std::size_t>(config.iterations));
  Eigen::VectorXd gradient;
  for (int it = 0; it < config.iterations; ++it) {
    std::vector<std::size_t> picks;
    picks.reserve(static_cast<std::size_t>(config.batch_size));
    for (int k = 0; k < config.batch_size; ++k) {
      picks.push_back(internal::weighted_index(data.weights, rng));
    }
    const std::vector<rope::RopeParams> models =
        sample_param_noise(params, config.noise, rng(), config.batch_size);
    double loss = 0.0;
    try {
      loss = batch_loss_and_gradient(data, picks, models, result.weights,
                                     config, gradient);
    } catch (const NonFiniteError& e) {
      throw DivergedError(std::string("training diverged at iteration ") +
                          std::to_string(it) + ": " + e.what());
    }
    if (config.iterations > 1) {
      adam.learning_rate =
          config.learning_rate *
          std::pow(config.lr_final_fraction,
                   static_cast<double>(it) / (config.iterations - 1));
    }
    diff::adam_step(result.weights.values, gradient, adam);
    result.losses.push_back(loss);
  }
  return result;
}

// Training from a freshly initialized network for the first task's kind.
inline TrainResult train(const TrainingSet& data, const rope::RopeParams& params,
                         const TrainConfig& config) {
  data.validate();
  const int state_width = 6 * data.states.front().point_count();
  const PolicyWeights net =
      make_policy(state_width, data.specs.front().kind, config.command_bound,
                  config.seed, params.gravity);
  return train(data, params, config, net);
}

}  // namespace spid::control

#endif  // SPID_CONTROL_TRAIN_HPP_

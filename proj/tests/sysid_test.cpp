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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "spid/errors.hpp"
#include "spid/rope/model.hpp"
#include "spid/sysid/dataset.hpp"
#include "spid/sysid/identify.hpp"
#include "spid/sysid/losses.hpp"
#include "spid/sysid/param_map.hpp"

namespace spid::sysid {
namespace {

// A short heterogeneous desk-scale rope. Damping values are deliberately
// moderate: the discrete stepper loses stability (and the loss landscape its
// smoothness) once per-step damping decay approaches one.
rope::RopeParams test_truth() {
  rope::RopeParams p;
  p.masses = {0.002, 0.002, 0.002, 0.004};
  p.rest_lengths = {0.08, 0.08, 0.08};
  p.gravity = Vec3d(0.0, 0.0, -9.81);
  p.air_drag = 2e-4;
  p.linear_stiffness = {25.0, 55.0, 40.0};
  p.linear_damping = {0.3, 0.6, 0.45};
  p.bending_stiffness = {1.5e-3, 3e-3};
  p.bending_damping = {1.0e-4, 2.5e-4};
  p.torsion_stiffness = {4e-4};
  return p;
}

rope::RopeState hanging_state(const rope::RopeParams& p) {
  rope::RopeState s;
  double z = 0.0;
  s.positions.push_back(Vec3d::Zero());
  for (double l : p.rest_lengths) {
    z -= l;
    s.positions.push_back(Vec3d(0.0, 0.0, z));
  }
  s.velocities.assign(s.positions.size(), Vec3d::Zero());
  return s;
}

std::vector<Vec3d> swing_commands(int steps, double h, double ax, double fx,
                                  double ay, double fy, double phase) {
  std::vector<Vec3d> u(static_cast<std::size_t>(steps));
  for (int t = 0; t < steps; ++t) {
    const double s = t * h;
    u[static_cast<std::size_t>(t)] =
        Vec3d(ax * std::sin(2.0 * std::numbers::pi * fx * s),
              ay * std::sin(2.0 * std::numbers::pi * fy * s + phase), 0.0);
  }
  return u;
}

constexpr double kSampleDt = 0.01;
constexpr double kIntegrationDt = 1e-3;
constexpr int kSubsteps = 10;

SysIdDataset record_motion(const rope::RopeParams& params,
                           const std::vector<Vec3d>& controls) {
  const rope::RopeState x0 = hanging_state(params);
  std::vector<rope::RopeState> traj;
  traj.push_back(x0);
  const auto rolled =
      rope::rollout(x0, controls, params, kIntegrationDt, kSubsteps);
  traj.insert(traj.end(), rolled.begin(), rolled.end());
  return dataset_from_states(traj, controls, kSampleDt);
}

// Tip error of `fitted` against `truth` on a 2 s excitation unseen during
// identification.
double held_out_rmse(const rope::RopeParams& fitted,
                     const rope::RopeParams& truth) {
  const auto controls = swing_commands(200, kSampleDt, 0.3, 0.9, 0.2, 1.4, 0.3);
  const rope::RopeState x0 = hanging_state(truth);
  const auto reference =
      rope::rollout(x0, controls, truth, kIntegrationDt, kSubsteps);
  const auto predicted =
      rope::rollout(x0, controls, fitted, kIntegrationDt, kSubsteps);
  return rmse_tip(predicted, reference);
}

rope::RopeParams perturb_truth(const rope::RopeParams& truth) {
  rope::RopeParams init = truth;
  const double f[6] = {1.25, 0.8, 1.2, 0.75, 1.3, 0.7};
  for (std::size_t i = 0; i < init.linear_stiffness.size(); ++i) {
    init.linear_stiffness[i] *= f[i % 6];
    init.linear_damping[i] *= f[(i + 1) % 6];
  }
  for (std::size_t i = 0; i < init.bending_stiffness.size(); ++i) {
    init.bending_stiffness[i] *= f[(i + 2) % 6];
    init.bending_damping[i] *= f[(i + 3) % 6];
  }
  init.torsion_stiffness[0] *= 1.3;
  init.air_drag *= 0.7;
  return init;
}

TEST(PositionLoss, HandValues) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
  std::vector<Eigen::VectorXd> measured(5, zero);
  std::vector<Eigen::VectorXd> predicted(5, zero);
  EXPECT_EQ(position_loss(predicted, measured, 4), 0.0);

  // A constant offset d on all 6 coordinates of two points scores 6 d^2 at
  // every sample, hence also in the mean.
  const double d = 0.01;
  for (auto& sample : predicted) {
    sample = Eigen::VectorXd::Constant(6, d);
  }
  EXPECT_NEAR(position_loss(predicted, measured, 4), 6.0 * d * d, 1e-15);

  // Horizon 1 is the squared error of the first rolled-out sample alone.
  predicted[1] = zero;
  predicted[1][2] = 0.05;
  EXPECT_NEAR(position_loss(predicted, measured, 1), 0.05 * 0.05, 1e-15);

  EXPECT_THROW(position_loss(predicted, measured, 5), DimensionMismatchError);
  EXPECT_THROW(position_loss(predicted, measured, 0), DimensionMismatchError);
}

TEST(RmseTip, HandValuesAndGuards) {
  const rope::RopeParams params = test_truth();
  const rope::RopeState base = hanging_state(params);
  std::vector<rope::RopeState> a(4, base);
  std::vector<rope::RopeState> b(4, base);
  EXPECT_EQ(rmse_tip(a, b), 0.0);

  // A constant tip offset of magnitude d gives exactly d.
  const Vec3d offset(0.03, -0.04, 0.12);  // norm 0.13
  for (auto& state : a) state.positions.back() += offset;
  EXPECT_NEAR(rmse_tip(a, b), 0.13, 1e-12);

  b.pop_back();
  EXPECT_THROW(rmse_tip(a, b), DimensionMismatchError);
  a.clear();
  b.clear();
  EXPECT_THROW(rmse_tip(a, b), EmptyInputError);
}

TEST(Params, TieBroadcastsMeansAndUntieKeepsValues) {
  rope::RopeParams params = test_truth();
  params.linear_stiffness = {1.0, 3.0, 2.0};
  const rope::RopeParams tied = tie_parameters(params);
  EXPECT_DOUBLE_EQ(tied.linear_stiffness[0], 2.0);
  EXPECT_DOUBLE_EQ(tied.linear_stiffness[1], 2.0);
  EXPECT_DOUBLE_EQ(tied.linear_stiffness[2], 2.0);
  ASSERT_EQ(tied.linear_damping.size(), params.linear_damping.size());
  ASSERT_EQ(tied.bending_stiffness.size(), params.bending_stiffness.size());

  // Measured quantities are not averaged away.
  EXPECT_EQ(tied.masses, params.masses);
  EXPECT_EQ(tied.rest_lengths, params.rest_lengths);
  EXPECT_EQ(tied.gravity, params.gravity);
  EXPECT_EQ(tied.air_drag, params.air_drag);

  // Tying an already-uniform group changes nothing.
  const rope::RopeParams retied = tie_parameters(tied);
  EXPECT_EQ(retied.linear_stiffness, tied.linear_stiffness);

  // Untying is the identity on values; freedom lives in the binding.
  const rope::RopeParams untied = untie_parameters(tied);
  EXPECT_EQ(untied.linear_stiffness, tied.linear_stiffness);
  EXPECT_EQ(untied.bending_damping, tied.bending_damping);
}

TEST(SubstepsPerSample, IntegerRatioOrThrow) {
  EXPECT_EQ(substeps_per_sample(0.01, 1e-3), 10);
  EXPECT_EQ(substeps_per_sample(0.01, 0.01), 1);
  EXPECT_THROW(substeps_per_sample(0.01, 3e-3), ConfigError);
  EXPECT_THROW(substeps_per_sample(0.01, 0.02), ConfigError);
  EXPECT_THROW(substeps_per_sample(0.01, 0.0), ConfigError);
}

TEST(Identify, GroundTruthInitIsAnExactFixedPoint) {
  const rope::RopeParams truth = test_truth();
  const auto controls = swing_commands(150, kSampleDt, 0.35, 1.1, 0.25, 0.6, 0.8);
  const SysIdDataset data = record_motion(truth, controls);

  SysIdConfig config;
  config.max_iterations = 500;
  config.stage = Stage::kHeterogeneous;
  const IdentifyResult result = identify(data, truth, config);

  // The dataset came from this very model, so the loss and its gradient are
  // exactly zero from the first iteration on, and the optimizer never moves.
  ASSERT_FALSE(result.log.empty());
  for (const IdentifyLogEntry& entry : result.log) {
    EXPECT_EQ(entry.loss, 0.0);
  }
  for (std::size_t j = 0; j + 1 < result.log.size(); ++j) {
    EXPECT_LE(result.log[j].horizon, result.log[j + 1].horizon);
  }
  EXPECT_EQ(result.log.back().horizon, data.sample_steps());
  // Terminates through the stall rule, well before the iteration budget.
  EXPECT_LT(result.log.size(), 100u);

  EXPECT_EQ(result.params.linear_stiffness, truth.linear_stiffness);
  EXPECT_EQ(result.params.linear_damping, truth.linear_damping);
  EXPECT_EQ(result.params.bending_stiffness, truth.bending_stiffness);
  EXPECT_EQ(result.params.bending_damping, truth.bending_damping);
  EXPECT_EQ(result.params.torsion_stiffness, truth.torsion_stiffness);
  EXPECT_EQ(result.params.air_drag, truth.air_drag);
}

TEST(Identify, RecoversPerturbedHeterogeneousParameters) {
  const rope::RopeParams truth = test_truth();
  const auto controls = swing_commands(150, kSampleDt, 0.35, 1.1, 0.25, 0.6, 0.8);
  const SysIdDataset data = record_motion(truth, controls);
  const rope::RopeParams init = perturb_truth(truth);

  const double rmse_before = held_out_rmse(init, truth);
  SysIdConfig config;
  config.max_iterations = 200;
  config.stage = Stage::kHeterogeneous;
  const IdentifyResult result = identify(data, init, config);
  const double rmse_after = held_out_rmse(result.params, truth);

  EXPECT_EQ(result.log.back().horizon, data.sample_steps());
  EXPECT_LT(result.log.back().loss, 1e-7);
  EXPECT_LT(rmse_after, 1e-4);
  EXPECT_LT(rmse_after, rmse_before / 20.0);
}

TEST(Identify, TwoStageRefinementImprovesHeldOutError) {
  const rope::RopeParams truth = test_truth();
  const auto controls = swing_commands(150, kSampleDt, 0.35, 1.1, 0.25, 0.6, 0.8);
  const SysIdDataset data = record_motion(truth, controls);

  // Homogeneous guess of the right order of magnitude, no per-element
  // structure.
  rope::RopeParams seed = truth;
  std::fill(seed.linear_stiffness.begin(), seed.linear_stiffness.end(), 30.0);
  std::fill(seed.linear_damping.begin(), seed.linear_damping.end(), 0.4);
  std::fill(seed.bending_stiffness.begin(), seed.bending_stiffness.end(), 2e-3);
  std::fill(seed.bending_damping.begin(), seed.bending_damping.end(), 1.5e-4);
  std::fill(seed.torsion_stiffness.begin(), seed.torsion_stiffness.end(), 4e-4);
  seed.air_drag = 1e-4;

  SysIdConfig stage_one;
  stage_one.max_iterations = 200;
  stage_one.stage = Stage::kHomogeneous;
  const IdentifyResult first = identify(data, seed, stage_one);

  SysIdConfig stage_two = stage_one;
  stage_two.stage = Stage::kHeterogeneous;
  const IdentifyResult second = identify(data, first.params, stage_two);

  const double rmse_seed = held_out_rmse(seed, truth);
  const double rmse_first = held_out_rmse(first.params, truth);
  const double rmse_second = held_out_rmse(second.params, truth);
  // The tied stage already helps; freeing per-element parameters on a
  // heterogeneous rope must help substantially more.
  EXPECT_LT(rmse_first, rmse_seed);
  EXPECT_LT(rmse_second, rmse_first / 5.0);

  // The tied stage keeps each group uniform.
  for (double v : first.params.linear_stiffness) {
    EXPECT_DOUBLE_EQ(v, first.params.linear_stiffness[0]);
  }
}

TEST(Identify, DroppingBendingDampingDegradesHeldOutError) {
  const rope::RopeParams truth = test_truth();
  const auto controls = swing_commands(150, kSampleDt, 0.35, 1.1, 0.25, 0.6, 0.8);
  const SysIdDataset data = record_motion(truth, controls);
  const rope::RopeParams init = perturb_truth(truth);

  SysIdConfig config;
  config.max_iterations = 150;
  config.stage = Stage::kHeterogeneous;
  const IdentifyResult full = identify(data, init, config);

  // Same fit with the bending damper removed from the model class.
  rope::RopeParams gutted = init;
  std::fill(gutted.bending_damping.begin(), gutted.bending_damping.end(), 0.0);
  ParamMap map = make_stage_map(gutted, Stage::kHeterogeneous);
  map.bending_damping = Binding::kFixed;
  const IdentifyResult ablated = identify(data, map, config);
  for (double v : ablated.params.bending_damping) EXPECT_EQ(v, 0.0);

  const double rmse_full = held_out_rmse(full.params, truth);
  const double rmse_ablated = held_out_rmse(ablated.params, truth);
  EXPECT_LT(rmse_full, 1e-4);
  EXPECT_GT(rmse_ablated, 1e-4);
  EXPECT_GT(rmse_ablated, 10.0 * rmse_full);
}

TEST(Identify, ExplodingRateReportsDivergence) {
  const rope::RopeParams truth = test_truth();
  const auto controls = swing_commands(60, kSampleDt, 0.35, 1.1, 0.25, 0.6, 0.8);
  const SysIdDataset data = record_motion(truth, controls);

  SysIdConfig config;
  config.learning_rate = 20.0;  // one step scales parameters by e^20
  config.max_iterations = 50;
  const rope::RopeParams init = perturb_truth(truth);
  EXPECT_THROW(identify(data, init, config), DivergedError);
}

TEST(Identify, RejectsBadConfigAndMismatchedModel) {
  const rope::RopeParams truth = test_truth();
  const auto controls = swing_commands(30, kSampleDt, 0.3, 1.0, 0.2, 0.7, 0.4);
  const SysIdDataset data = record_motion(truth, controls);

  SysIdConfig config;
  config.initial_horizon = 0;
  EXPECT_THROW(identify(data, truth, config), ConfigError);
  config.initial_horizon = data.sample_steps() + 1;
  EXPECT_THROW(identify(data, truth, config), ConfigError);

  config = SysIdConfig{};
  config.integration_dt = 3e-3;  // not a divisor of the 0.01 s sample interval
  EXPECT_THROW(identify(data, truth, config), ConfigError);

  config = SysIdConfig{};
  rope::RopeParams bigger = truth;
  bigger.masses.push_back(0.002);
  bigger.rest_lengths.push_back(0.08);
  bigger.linear_stiffness.push_back(40.0);
  bigger.linear_damping.push_back(0.45);
  bigger.bending_stiffness.push_back(2e-3);
  bigger.bending_damping.push_back(1e-4);
  bigger.torsion_stiffness.push_back(4e-4);
  EXPECT_THROW(identify(data, bigger, config), DimensionMismatchError);
}

}  // namespace
}  // namespace spid::sysid

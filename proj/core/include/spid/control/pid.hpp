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

#ifndef SPID_CONTROL_PID_HPP_
#define SPID_CONTROL_PID_HPP_

#include "spid/errors.hpp"
#include "spid/rope/state.hpp"
#include "spid/vec.hpp"

namespace spid::control {

// Tuned PID reference controller on the tip position error.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double dt = 0.01;              // control period, seconds
  double command_bound = 2.5;    // m/s, hard norm clamp
  double integral_limit = 1.0;   // anti-windup clamp per axis, m*s
};

struct PidMemory {
  Vec3d integral = Vec3d::Zero();
  Vec3d previous_error = Vec3d::Zero();
  bool has_previous = false;
};

// One PID step on e = target - tip. The integral is clamped per axis before
// use (anti-windup) and the command is clamped to the bound in norm, so a
// saturated command has magnitude exactly the bound.
inline Vec3d pid_baseline(const rope::RopeState& state, const Vec3d& target,
                          const PidGains& gains, PidMemory& memory) {
  rope::check_state_shape(state);
  if (!(gains.dt > 0.0)) throw DimensionMismatchError("pid dt must be positive");
  const Vec3d error = target - state.positions.back();
  memory.integral += error * gains.dt;
  for (int d = 0; d < 3; ++d) {
    if (memory.integral[d] > gains.integral_limit) {
      memory.integral[d] = gains.integral_limit;
    } else if (memory.integral[d] < -gains.integral_limit) {
      memory.integral[d] = -gains.integral_limit;
    }
  }
  Vec3d derivative = Vec3d::Zero();
  if (memory.has_previous) {
    derivative = (error - memory.previous_error) / gains.dt;
  }
  memory.previous_error = error;
  memory.has_previous = true;

  Vec3d command =
      gains.kp * error + gains.ki * memory.integral + gains.kd * derivative;
  const double magnitude = command.norm();
  if (magnitude > gains.command_bound) {
    command *= gains.command_bound / magnitude;
  }
  return command;
}

}  // namespace spid::control

#endif  // SPID_CONTROL_PID_HPP_

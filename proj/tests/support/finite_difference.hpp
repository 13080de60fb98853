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

// Independent numerical oracles. Everything here differentiates plain scalar
// evaluations by central differences; nothing reuses the gradients, angle
// rates, or force expressions under test.

#ifndef SPID_TESTS_SUPPORT_FINITE_DIFFERENCE_HPP_
#define SPID_TESTS_SUPPORT_FINITE_DIFFERENCE_HPP_

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "spid/rope/params.hpp"
#include "spid/rope/state.hpp"

namespace spid::testing {

// Central difference of a scalar function of one packed vector.
Eigen::VectorXd gradient_fd(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double step);

// Relative discrepancy between two stacked vectors:
// |a - b| / max(|a|, |b|, floor).
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      double floor = 1e-9);

Eigen::VectorXd pack_forces(const std::vector<Vec3d>& forces);
Eigen::VectorXd pack_positions(const rope::RopeState& state);
void unpack_positions(const Eigen::VectorXd& x, rope::RopeState& state);

// Bend angle of element j (1-based) evaluated directly from positions.
double bend_angle_at(const rope::RopeState& state, int element);

// Sum of quadratic bend energies, evaluated directly from positions.
double bending_energy_at(const rope::RopeState& state,
                         const rope::RopeParams& params);

// Sum of quadratic twist energies via the folded plane-angle definition,
// including the near-straight fade factors.
double torsion_energy_at(const rope::RopeState& state,
                         const rope::RopeParams& params);

// Sum of quadratic stretch energies.
double stretch_energy_at(const rope::RopeState& state,
                         const rope::RopeParams& params);

// Force oracle: minus the central difference of an energy with respect to
// every point coordinate.
Eigen::VectorXd force_oracle_from_energy(
    const rope::RopeState& state,
    const std::function<double(const rope::RopeState&)>& energy, double step);

// Bend rate oracle: advect positions along the velocities by +/- delta and
// central-difference the bend angle.
double bend_rate_oracle(const rope::RopeState& state, int element,
                        double delta);

// Bend damping force oracle built from angle differences only: for each
// element, the force on an incident point is
//   -(damping) * (angle rate oracle) * (angle gradient oracle).
Eigen::VectorXd bending_damping_oracle(const rope::RopeState& state,
                                       const rope::RopeParams& params,
                                       double step);

}  // namespace spid::testing

#endif  // SPID_TESTS_SUPPORT_FINITE_DIFFERENCE_HPP_

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

#include "support/random_configs.hpp"

#include <cmath>

#include <Eigen/Geometry>

namespace spid::testing {

Vec3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3d v;
  do {
    v = Vec3d(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-3);
  return v.normalized();
}

rope::RopeParams random_params(int n_links, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rope::RopeParams p;
  const int n_points = n_links + 1;
  p.masses.resize(n_points);
  for (double& m : p.masses) m = 0.002 + 0.02 * u(rng);
  p.rest_lengths.assign(n_links, 0.0);
  for (double& l : p.rest_lengths) l = 0.08 + 0.08 * u(rng);
  p.gravity = Vec3d(0.0, 0.0, -9.81);
  p.air_drag = 1e-4 + 1e-3 * u(rng);
  p.linear_stiffness.resize(n_links);
  for (double& k : p.linear_stiffness) k = 20.0 + 60.0 * u(rng);
  p.linear_damping.resize(n_links);
  for (double& c : p.linear_damping) c = 0.05 + 0.5 * u(rng);
  p.bending_stiffness.resize(n_links - 1);
  for (double& k : p.bending_stiffness) k = 1e-3 + 8e-3 * u(rng);
  p.bending_damping.resize(n_links - 1);
  for (double& c : p.bending_damping) c = 5e-5 + 5e-4 * u(rng);
  p.torsion_stiffness.resize(n_links >= 2 ? n_links - 2 : 0);
  for (double& k : p.torsion_stiffness) k = 1e-4 + 1e-3 * u(rng);
  return p;
}

rope::RopeState random_bent_state(const rope::RopeParams& params,
                                  std::mt19937_64& rng,
                                  double velocity_scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  const int n_links = params.link_count();
  rope::RopeState state;
  state.positions.resize(n_links + 1);
  state.velocities.resize(n_links + 1);
  state.positions[0] = Vec3d(0.2 * n(rng), 0.2 * n(rng), 0.2 * n(rng));

  Vec3d dir = random_unit(rng);
  for (int j = 0; j < n_links; ++j) {
    if (j > 0) {
      // Rotate the previous direction by a bend angle away from the guard
      // branch points, about a random perpendicular axis, then add some twist
      // so dihedral angles are generic.
      const double bend = 0.15 + 2.4 * u(rng);
      Vec3d axis;
      do {
        axis = random_unit(rng).cross(dir);
      } while (axis.norm() < 0.1);
      axis.normalize();
      dir = Eigen::AngleAxisd(bend, axis) * dir;
      dir.normalize();
    }
    const double len = params.rest_lengths[j] * (0.7 + 0.6 * u(rng));
    state.positions[j + 1] = state.positions[j] + len * dir;
  }
  for (auto& v : state.velocities) {
    v = velocity_scale * Vec3d(n(rng), n(rng), n(rng));
  }
  return state;
}

}  // namespace spid::testing

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

#ifndef SPID_HARNESS_REFERENCE_HPP_
#define SPID_HARNESS_REFERENCE_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spid/errors.hpp"
#include "spid/rng.hpp"
#include "spid/rope/params.hpp"
#include "spid/rope/state.hpp"

namespace spid::harness {

// Desk-scale nominal rope: light, stiff links, weak bending. Per-point mass
// and per-link values; damping small enough that explicit substeps at 1 ms
// stay well conditioned (c_b / (m l^2) * dt << 1).
inline rope::RopeParams nominal_params(int point_count) {
  if (point_count < 3) {
    throw InsufficientPointsError("reference rope needs >= 3 points");
  }
  const int links = point_count - 1;
  rope::RopeParams p;
  p.masses.assign(static_cast<std::size_t>(point_count), 0.0025);
  p.rest_lengths.assign(static_cast<std::size_t>(links), 0.1);
  p.gravity = Vec3d(0.0, 0.0, -9.81);
  p.air_drag = 5e-4;
  p.linear_stiffness.assign(static_cast<std::size_t>(links), 40.0);
  p.linear_damping.assign(static_cast<std::size_t>(links), 0.05);
  p.bending_stiffness.assign(static_cast<std::size_t>(links - 1), 3e-3);
  p.bending_damping.assign(static_cast<std::size_t>(links - 1), 1.5e-3);
  p.torsion_stiffness.assign(
      static_cast<std::size_t>(links > 1 ? links - 2 : 0), 1e-3);
  return p;
}

// Ground truth plus what a tape measure and a scale can see. `published`
// keeps the directly measured quantities (point count, rest lengths, masses,
// gravity) from the truth and resets every non-measurable array to the
// nominal base, which is where identification starts.
struct ReferenceRope {
  rope::RopeParams hidden;
  rope::RopeParams published;
};

// Perturbs every per-element entry of the nominal rope by an independent
// uniform factor in [1 - heterogeneity, 1 + heterogeneity]. heterogeneity 0
// reproduces the nominal arrays exactly; a fixed seed reproduces the rope.
inline ReferenceRope generate_reference_rope(std::uint64_t seed,
                                             int point_count,
                                             double heterogeneity) {
  if (heterogeneity < 0.0 || heterogeneity >= 1.0) {
    throw ConfigError("heterogeneity must lie in [0, 1)");
  }
  ReferenceRope rope;
  rope.hidden = nominal_params(point_count);
  std::mt19937_64 rng(seed);
  auto jitter = [&](std::vector<double>& values) {
    for (double& v : values) {
      v *= 1.0 + heterogeneity * uniform_double(rng, -1.0, 1.0);
    }
  };
  jitter(rope.hidden.masses);
  jitter(rope.hidden.rest_lengths);
  jitter(rope.hidden.linear_stiffness);
  jitter(rope.hidden.linear_damping);
  jitter(rope.hidden.bending_stiffness);
  jitter(rope.hidden.bending_damping);
  jitter(rope.hidden.torsion_stiffness);
  rope.hidden.air_drag *= 1.0 + heterogeneity * uniform_double(rng, -1.0, 1.0);

  rope.published = nominal_params(point_count);
  rope.published.masses = rope.hidden.masses;
  rope.published.rest_lengths = rope.hidden.rest_lengths;
  rope.published.gravity = rope.hidden.gravity;
  return rope;
}

// Straight rest configuration hanging from `top` along gravity, at rest.
inline rope::RopeState hanging_state(const rope::RopeParams& params,
                                     const Vec3d& top = Vec3d::Zero()) {
  const Vec3d down = params.gravity.norm() > 0.0
                         ? Vec3d(params.gravity.normalized())
                         : Vec3d(0.0, 0.0, -1.0);
  rope::RopeState state;
  state.positions.push_back(top);
  for (double rest : params.rest_lengths) {
    state.positions.push_back(state.positions.back() + rest * down);
  }
  state.velocities.assign(state.positions.size(), Vec3d::Zero());
  return state;
}

// Rest configuration swung rigidly about the top point by `angle` radians
// from the hanging direction, inside the plane spanned by gravity and
// `swing`. The classic unseen-initial-displacement family.
inline rope::RopeState displaced_state(const rope::RopeParams& params,
                                       double angle,
                                       const Vec3d& swing = Vec3d(1, 0, 0),
                                       const Vec3d& top = Vec3d::Zero()) {
  const Vec3d down = params.gravity.norm() > 0.0
                         ? Vec3d(params.gravity.normalized())
                         : Vec3d(0.0, 0.0, -1.0);
  Vec3d side = swing - swing.dot(down) * down;
  if (side.norm() < 1e-12) {
    throw ConfigError("swing direction is parallel to gravity");
  }
  side.normalize();
  const Vec3d dir = std::cos(angle) * down + std::sin(angle) * side;
  rope::RopeState state;
  state.positions.push_back(top);
  for (double rest : params.rest_lengths) {
    state.positions.push_back(state.positions.back() + rest * dir);
  }
  state.velocities.assign(state.positions.size(), Vec3d::Zero());
  return state;
}

// One cell of the unseen-dynamics evaluation grid: multiplicative factors on
// the three properties the test distribution varies.
struct GridCell {
  int index = 0;
  double mass_factor = 1.0;
  double bending_factor = 1.0;
  double torsion_factor = 1.0;
};

// Levels per axis for an `n`-level grid, spanning the factor range evenly in
// the log domain so 3 levels give {low, 1, high}.
inline std::vector<double> grid_levels(int n, double low, double high) {
  if (n < 1) throw ConfigError("grid needs >= 1 level per axis");
  std::vector<double> levels;
  if (n == 1) {
    levels.push_back(1.0);
    return levels;
  }
  const double step = std::log(high / low) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    levels.push_back(low * std::exp(step * i));
  }
  return levels;
}

// The hidden test distribution: an n^3 grid over point mass, bending
// stiffness, and torsion stiffness factors, with a small seeded jitter per
// cell so no cell coincides with the training nominal. Cells are ordered by
// grid index (mass outermost, torsion innermost); a fixed seed reproduces
// the grid exactly, which is how evaluation commands regenerate it in
// memory instead of reading the hidden file.
inline std::vector<GridCell> hidden_grid(std::uint64_t seed, int n) {
  const std::vector<double> mass = grid_levels(n, 0.6, 1.4);
  const std::vector<double> bend = grid_levels(n, 0.5, 2.0);
  const std::vector<double> twist = grid_levels(n, 0.5, 2.0);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<GridCell> cells;
  cells.reserve(static_cast<std::size_t>(n) * n * n);
  int index = 0;
  for (double m : mass) {
    for (double b : bend) {
      for (double t : twist) {
        GridCell cell;
        cell.index = index++;
        cell.mass_factor = m * (1.0 + 0.05 * uniform_double(rng, -1.0, 1.0));
        cell.bending_factor =
            b * (1.0 + 0.05 * uniform_double(rng, -1.0, 1.0));
        cell.torsion_factor =
            t * (1.0 + 0.05 * uniform_double(rng, -1.0, 1.0));
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

// Applies a grid cell to a base rope.
inline rope::RopeParams apply_cell(const rope::RopeParams& base,
                                   const GridCell& cell) {
  rope::RopeParams out = base;
  for (double& m : out.masses) m *= cell.mass_factor;
  for (double& k : out.bending_stiffness) k *= cell.bending_factor;
  for (double& k : out.torsion_stiffness) k *= cell.torsion_factor;
  return out;
}

}  // namespace spid::harness

#endif  // SPID_HARNESS_REFERENCE_HPP_

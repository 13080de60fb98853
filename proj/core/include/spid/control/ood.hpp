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

#ifndef SPID_CONTROL_OOD_HPP_
#define SPID_CONTROL_OOD_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spid/control/policy.hpp"
#include "spid/control/train.hpp"
#include "spid/errors.hpp"
#include "spid/rope/state.hpp"

namespace spid::control {

enum class OodTriggerKind { kEnergyPlateau, kEnergyGrowth, kTrackingDeviation };

inline const char* ood_trigger_name(OodTriggerKind kind) {
  switch (kind) {
    case OodTriggerKind::kEnergyPlateau: return "energy_plateau";
    case OodTriggerKind::kEnergyGrowth: return "energy_growth";
    case OodTriggerKind::kTrackingDeviation: return "tracking_deviation";
  }
  return "unknown";
}

// Detection thresholds for the online loss monitor. For stabilization the
// history holds offset energies and detection looks at the trailing window;
// for tracking it holds tip-to-target distances and only the latest value
// matters. Floors and slopes are in the history's units (J, J/s, m).
struct OodThresholds {
  double energy_floor = 0.0;        // plateau only counts above this level
  double plateau_slope = 0.0;       // |trend| below this means stuck
  double growth_slope = 0.0;        // trend above this means blowing up
  int window_steps = 100;           // trailing samples examined
  double sample_dt = 0.01;          // seconds between history samples
  double tracking_distance = 0.05;  // meters
};

// A rollout moment flagged as out-of-distribution, to be fed back into the
// training pool.
struct OodEvent {
  rope::RopeState state;
  TaskSpec spec;
  double timestamp = 0.0;
  OodTriggerKind trigger = OodTriggerKind::kEnergyPlateau;
};

// Least-squares slope of the samples against time, in units per second.
inline double history_slope(std::span<const double> window, double sample_dt) {
  const int n = static_cast<int>(window.size());
  if (n < 2) return 0.0;
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_t += static_cast<double>(i);
    mean_y += window[static_cast<std::size_t>(i)];
  }
  mean_t /= n;
  mean_y /= n;
  double cov = 0.0;
  double var = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dt_i = static_cast<double>(i) - mean_t;
    cov += dt_i * (window[static_cast<std::size_t>(i)] - mean_y);
    var += dt_i * dt_i;
  }
  return cov / (var * sample_dt);
}

// Online out-of-distribution check on a loss history. Stabilization flags a
// window whose energy trend exceeds the growth slope, or whose mean sits
// above the floor while the trend is too flat to be making progress (the
// plateau/oscillation case). Tracking flags a current distance beyond the
// threshold. Returns nothing while the stabilization history is still
// shorter than the window.
inline std::optional<OodTriggerKind> ood_detect(std::span<const double> history,
                                                TaskKind kind,
                                                const OodThresholds& thresholds) {
  if (kind == TaskKind::kTracking) {
    if (history.empty()) return std::nullopt;
    if (history.back() > thresholds.tracking_distance) {
      return OodTriggerKind::kTrackingDeviation;
    }
    return std::nullopt;
  }
  const int w = thresholds.window_steps;
  if (w < 2) throw DimensionMismatchError("detection window must be >= 2 samples");
  if (static_cast<int>(history.size()) < w) return std::nullopt;
  const std::span<const double> window = history.subspan(history.size() - w);
  double mean = 0.0;
  for (double y : window) mean += y;
  mean /= static_cast<double>(w);
  const double slope = history_slope(window, thresholds.sample_dt);
  if (slope > thresholds.growth_slope) return OodTriggerKind::kEnergyGrowth;
  if (mean > thresholds.energy_floor &&
      std::abs(slope) < thresholds.plateau_slope) {
    return OodTriggerKind::kEnergyPlateau;
  }
  return std::nullopt;
}

// Hash of the state quantized to a 1 mm position and 1 cm/s velocity grid,
// so near-identical captures from repeated failures collide on purpose.
inline std::uint64_t quantized_state_hash(const rope::RopeState& state) {
  auto mix = [](std::uint64_t h, std::int64_t value) {
    h ^= static_cast<std::uint64_t>(value) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
    return h;
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Vec3d& p : state.positions) {
    for (int d = 0; d < 3; ++d) h = mix(h, std::llround(p[d] / 1e-3));
  }
  for (const Vec3d& v : state.velocities) {
    for (int d = 0; d < 3; ++d) h = mix(h, std::llround(v[d] / 1e-2));
  }
  return h;
}

// Folds detected events back into the training pool: each event state enters
// with `weight_boost` times the base sampling weight, and an event whose
// quantized state hash already appears in the pool adds its boost to that
// entry instead of duplicating it. Pre-existing entries keep their weights.
inline TrainingSet dagger_update(TrainingSet pool,
                                 const std::vector<OodEvent>& events,
                                 double weight_boost) {
  if (!(weight_boost > 1.0)) {
    throw DimensionMismatchError("weight boost must exceed 1");
  }
  pool.validate();
  std::vector<std::uint64_t> hashes;
  hashes.reserve(pool.states.size());
  for (const rope::RopeState& s : pool.states) {
    hashes.push_back(quantized_state_hash(s));
  }
  for (const OodEvent& event : events) {
    rope::check_state_shape(event.state);
    const std::uint64_t h = quantized_state_hash(event.state);
    bool merged = false;
    for (std::size_t i = 0; i < hashes.size(); ++i) {
      if (hashes[i] == h) {
        pool.weights[i] += weight_boost;
        merged = true;
        break;
      }
    }
    if (merged) continue;
    pool.states.push_back(event.state);
    pool.specs.push_back(event.spec);
    pool.weights.push_back(weight_boost);
    hashes.push_back(h);
  }
  return pool;
}

}  // namespace spid::control

#endif  // SPID_CONTROL_OOD_HPP_

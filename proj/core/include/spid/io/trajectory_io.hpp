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

#ifndef SPID_IO_TRAJECTORY_IO_HPP_
#define SPID_IO_TRAJECTORY_IO_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "spid/errors.hpp"
#include "spid/io/text.hpp"
#include "spid/rope/state.hpp"
#include "spid/sysid/dataset.hpp"

namespace spid::io {

// A recorded motion: full states at uniform sampling interval sample_dt,
// plus the command applied over each inter-sample window. There is one
// fewer control than states; the serialized form pads the final row with
// a zero command so every row has the same width.
struct TrajectoryRecord {
  std::vector<rope::RopeState> states;
  std::vector<Vec3d> controls;
  double sample_dt = 0.01;

  int sample_count() const { return static_cast<int>(states.size()); }
  int point_count() const {
    return states.empty() ? 0 : states.front().point_count();
  }

  void validate() const {
    if (states.size() < 2) {
      throw EmptyInputError("trajectory needs at least two samples");
    }
    if (controls.size() + 1 != states.size()) {
      throw DimensionMismatchError(
          "trajectory needs one control per inter-sample window");
    }
    if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) {
      throw ConfigError("trajectory sampling interval must be positive");
    }
    const int n = point_count();
    if (n < 2) throw InsufficientPointsError("trajectory needs >= 2 points");
    for (const auto& s : states) {
      if (s.point_count() != n ||
          static_cast<int>(s.velocities.size()) != n) {
        throw DimensionMismatchError("inconsistent state widths in trajectory");
      }
    }
  }
};

// Header: t, p0x, p0y, p0z, ..., pNz, v0x, ..., vNz, ux, uy, uz
inline std::string trajectory_header(int point_count) {
  std::string out = "t";
  for (int i = 0; i < point_count; ++i) {
    const std::string idx = std::to_string(i);
    out += ", p" + idx + "x, p" + idx + "y, p" + idx + "z";
  }
  for (int i = 0; i < point_count; ++i) {
    const std::string idx = std::to_string(i);
    out += ", v" + idx + "x, v" + idx + "y, v" + idx + "z";
  }
  out += ", ux, uy, uz";
  return out;
}

inline void write_trajectory(const std::string& path,
                             const TrajectoryRecord& record) {
  record.validate();
  auto out = open_for_write(path);
  out << trajectory_header(record.point_count()) << '\n';
  for (std::size_t row = 0; row < record.states.size(); ++row) {
    const auto& state = record.states[row];
    out << format_full(static_cast<double>(row) * record.sample_dt);
    for (const auto& p : state.positions) {
      out << ", " << format_full(p[0]) << ", " << format_full(p[1]) << ", "
          << format_full(p[2]);
    }
    for (const auto& v : state.velocities) {
      out << ", " << format_full(v[0]) << ", " << format_full(v[1]) << ", "
          << format_full(v[2]);
    }
    const Vec3d u = row < record.controls.size() ? record.controls[row]
                                                 : Vec3d::Zero().eval();
    out << ", " << format_full(u[0]) << ", " << format_full(u[1]) << ", "
        << format_full(u[2]);
    out << '\n';
  }
}

// Reads the write_trajectory format. Files without the trailing command
// columns are accepted (commands zero-filled): width 1 + 6(N+1) instead of
// 4 + 6(N+1). Time stamps must increase uniformly.
inline TrajectoryRecord read_trajectory(const std::string& path) {
  auto in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trajectory file: " + path);
  const auto header = split_commas(line);
  const std::size_t cols = header.size();
  bool has_controls = false;
  std::size_t point_count = 0;
  if (cols >= 10 && (cols - 4) % 6 == 0 && header[cols - 3] == "ux") {
    has_controls = true;
    point_count = (cols - 4) / 6;
  } else if (cols >= 7 && (cols - 1) % 6 == 0) {
    point_count = (cols - 1) / 6;
  } else {
    throw IoError("unrecognized trajectory header in " + path);
  }

  TrajectoryRecord record;
  std::vector<double> times;
  while (std::getline(in, line)) {
    const auto fields = split_commas(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (fields.size() != cols) {
      throw IoError("trajectory row width mismatch in " + path);
    }
    std::vector<double> values(cols);
    for (std::size_t i = 0; i < cols; ++i) values[i] = parse_double(fields[i]);
    times.push_back(values[0]);
    rope::RopeState state;
    state.positions.resize(point_count);
    state.velocities.resize(point_count);
    std::size_t at = 1;
    for (std::size_t i = 0; i < point_count; ++i) {
      state.positions[i] = Vec3d(values[at], values[at + 1], values[at + 2]);
      at += 3;
    }
    for (std::size_t i = 0; i < point_count; ++i) {
      state.velocities[i] = Vec3d(values[at], values[at + 1], values[at + 2]);
      at += 3;
    }
    record.states.push_back(std::move(state));
    if (has_controls) {
      record.controls.emplace_back(values[at], values[at + 1], values[at + 2]);
    } else {
      record.controls.emplace_back(0.0, 0.0, 0.0);
    }
  }
  if (times.size() < 2) {
    throw EmptyInputError("trajectory needs at least two samples: " + path);
  }
  record.controls.pop_back();  // Final row's command pads the table only.

  const double h = times[1] - times[0];
  if (!(h > 0.0)) throw NonMonotonicTimeError("time stamps must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (!(step > 0.0)) throw NonMonotonicTimeError("time stamps must increase");
    if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw NonMonotonicTimeError("time stamps must be uniformly spaced");
    }
  }
  record.sample_dt = h;
  record.validate();
  return record;
}

// Assembles a record from a control sequence and the states it produced.
// `states` must include the initial state (one more entry than controls).
inline TrajectoryRecord make_trajectory(std::vector<rope::RopeState> states,
                                        std::vector<Vec3d> controls,
                                        double sample_dt) {
  TrajectoryRecord record;
  record.states = std::move(states);
  record.controls = std::move(controls);
  record.sample_dt = sample_dt;
  record.validate();
  return record;
}

inline sysid::SysIdDataset dataset_from_trajectory(
    const TrajectoryRecord& record) {
  record.validate();
  sysid::SysIdDataset data;
  data.sample_dt = record.sample_dt;
  data.controls = record.controls;
  data.positions.reserve(record.states.size());
  for (const auto& state : record.states) {
    data.positions.push_back(sysid::flatten_positions(state));
  }
  data.validate();
  return data;
}

}  // namespace spid::io

#endif  // SPID_IO_TRAJECTORY_IO_HPP_

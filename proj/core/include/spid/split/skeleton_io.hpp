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

#ifndef SPID_SPLIT_SKELETON_IO_HPP_
#define SPID_SPLIT_SKELETON_IO_HPP_

#include <span>
#include <string>
#include <vector>

#include "spid/errors.hpp"
#include "spid/io/text.hpp"
#include "spid/split/splitter.hpp"
#include "spid/split/tracking.hpp"

namespace spid::split {

// Skeleton frames are `x, y` per line, attachment end first. '#' starts a
// comment; an optional leading `x, y` header line is skipped.
inline SkeletonPoints read_skeleton(const std::string& path) {
  auto in = io::open_for_read(path);
  SkeletonPoints skeleton;
  std::string line;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto fields = io::split_commas(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (fields.size() != 2) {
      throw IoError("skeleton line needs two coordinates: " + path);
    }
    if (first_data_line) {
      first_data_line = false;
      if (fields[0] == "x" && fields[1] == "y") continue;
    }
    skeleton.points.emplace_back(io::parse_double(fields[0]),
                                 io::parse_double(fields[1]));
  }
  skeleton.validate();
  return skeleton;
}

inline void write_skeleton(const std::string& path,
                           const SkeletonPoints& skeleton) {
  auto out = io::open_for_write(path);
  out << "x, y\n";
  for (const auto& p : skeleton.points) {
    out << io::format_full(p[0]) << ", " << io::format_full(p[1]) << '\n';
  }
}

// Node walks across frames: `t, node, x, y` per split point, frames in
// time order, nodes in walk order within each frame.
inline void write_split_frames(const std::string& path,
                               std::span<const SplitFrame> frames) {
  auto out = io::open_for_write(path);
  out << "t, node, x, y\n";
  for (const auto& frame : frames) {
    for (int i = 0; i < frame.splits.size(); ++i) {
      out << io::format_full(frame.time) << ", " << i << ", "
          << io::format_full(frame.splits.points[i][0]) << ", "
          << io::format_full(frame.splits.points[i][1]) << '\n';
    }
  }
}

inline std::vector<SplitFrame> read_split_frames(const std::string& path) {
  auto in = io::open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty split file: " + path);
  if (io::split_commas(line) != std::vector<std::string>{"t", "node", "x", "y"}) {
    throw IoError("unrecognized split-frame header in " + path);
  }
  std::vector<SplitFrame> frames;
  while (std::getline(in, line)) {
    const auto fields = io::split_commas(line);
    if (fields.empty() || (fields.size() == 1 && fields[0].empty())) continue;
    if (fields.size() != 4) {
      throw IoError("split-frame line needs four fields: " + path);
    }
    const double t = io::parse_double(fields[0]);
    const int node = static_cast<int>(io::parse_double(fields[1]));
    const Vec2d p(io::parse_double(fields[2]), io::parse_double(fields[3]));
    if (frames.empty() || t != frames.back().time) {
      if (node != 0) throw IoError("frame must start at node 0: " + path);
      frames.push_back(SplitFrame{t, {}});
    } else if (node != frames.back().splits.size()) {
      throw IoError("split-frame nodes out of order in " + path);
    }
    frames.back().splits.points.push_back(p);
    frames.back().splits.source_indices.push_back(node);
  }
  for (auto& frame : frames) {
    frame.splits.spacing = internal::spacing_stats(frame.splits.points);
  }
  return frames;
}

}  // namespace spid::split

#endif  // SPID_SPLIT_SKELETON_IO_HPP_

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

#ifndef SPID_IO_PARAMS_IO_HPP_
#define SPID_IO_PARAMS_IO_HPP_

#include <string>
#include <vector>

#include "spid/errors.hpp"
#include "spid/io/text.hpp"
#include "spid/rope/params.hpp"

namespace spid::io {

// Flat key-value text document, one array per line, full decimal precision:
//   masses 0.002 0.002 ...
//   rest_lengths 0.1 ...
//   gravity 0 0 -9.81
//   air_drag 0.0002
//   linear_stiffness ... linear_damping ... bending_stiffness ...
//   bending_damping ... torsion_stiffness ...
inline std::string params_to_string(const rope::RopeParams& params) {
  std::string out;
  auto array_line = [&](const char* key, const std::vector<double>& values) {
    out += key;
    for (double v : values) {
      out += ' ';
      out += format_full(v);
    }
    out += '\n';
  };
  array_line("masses", params.masses);
  array_line("rest_lengths", params.rest_lengths);
  out += "gravity " + format_full(params.gravity[0]) + ' ' +
         format_full(params.gravity[1]) + ' ' + format_full(params.gravity[2]) +
         '\n';
  out += "air_drag " + format_full(params.air_drag) + '\n';
  array_line("linear_stiffness", params.linear_stiffness);
  array_line("linear_damping", params.linear_damping);
  array_line("bending_stiffness", params.bending_stiffness);
  array_line("bending_damping", params.bending_damping);
  array_line("torsion_stiffness", params.torsion_stiffness);
  return out;
}

inline void write_params(const std::string& path,
                         const rope::RopeParams& params) {
  auto out = open_for_write(path);
  out << params_to_string(params);
}

// Parses the write_params format and validates the result. Refuses files
// whose basename carries the hidden-ground-truth prefix: identification and
// evaluation must never look at the reference system's parameters.
inline rope::RopeParams read_params(const std::string& path) {
  refuse_hidden(path);
  auto in = open_for_read(path);
  rope::RopeParams params;
  bool saw_gravity = false;
  bool saw_drag = false;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    std::vector<double> values;
    values.reserve(tokens.size() - 1);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      values.push_back(parse_double(tokens[i]));
    }
    const std::string& key = tokens.front();
    if (key == "masses") {
      params.masses = values;
    } else if (key == "rest_lengths") {
      params.rest_lengths = values;
    } else if (key == "gravity") {
      if (values.size() != 3) throw IoError("gravity needs three components");
      params.gravity = Vec3d(values[0], values[1], values[2]);
      saw_gravity = true;
    } else if (key == "air_drag") {
      if (values.size() != 1) throw IoError("air_drag needs one value");
      params.air_drag = values[0];
      saw_drag = true;
    } else if (key == "linear_stiffness") {
      params.linear_stiffness = values;
    } else if (key == "linear_damping") {
      params.linear_damping = values;
    } else if (key == "bending_stiffness") {
      params.bending_stiffness = values;
    } else if (key == "bending_damping") {
      params.bending_damping = values;
    } else if (key == "torsion_stiffness") {
      params.torsion_stiffness = values;
    } else {
      throw IoError("unknown parameter line: " + key);
    }
  }
  if (!saw_gravity || !saw_drag) {
    throw IoError("parameter file missing gravity or air_drag: " + path);
  }
  rope::validate(params);
  return params;
}

}  // namespace spid::io

#endif  // SPID_IO_PARAMS_IO_HPP_

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

#ifndef SPID_IO_POLICY_IO_HPP_
#define SPID_IO_POLICY_IO_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spid/control/policy.hpp"
#include "spid/errors.hpp"
#include "spid/io/text.hpp"

namespace spid::io {

// Dimension-prefixed flat text vector. Layout, one entry per line group:
//   dims <L+1 layer widths>
//   command_bound <v>
//   zero_vertical <0|1>
//   gravity_dir <x> <y> <z>
//   values <count>
//   <count weight lines, one full-precision decimal each>
// Weights are row-major per layer, bias column last, layers in order.
inline void write_policy(const std::string& path,
                         const control::PolicyWeights& policy) {
  policy.validate();
  auto out = open_for_write(path);
  out << "dims";
  for (int d : policy.dims) out << ' ' << d;
  out << '\n';
  out << "command_bound " << format_full(policy.command_bound) << '\n';
  out << "zero_vertical " << (policy.zero_vertical ? 1 : 0) << '\n';
  out << "gravity_dir " << format_full(policy.gravity_dir[0]) << ' '
      << format_full(policy.gravity_dir[1]) << ' '
      << format_full(policy.gravity_dir[2]) << '\n';
  out << "values " << policy.values.size() << '\n';
  for (Eigen::Index i = 0; i < policy.values.size(); ++i) {
    out << format_full(policy.values[i]) << '\n';
  }
}

inline control::PolicyWeights read_policy(const std::string& path) {
  auto in = open_for_read(path);
  control::PolicyWeights policy;
  std::string line;

  auto next_tokens = [&](const char* what) {
    while (std::getline(in, line)) {
      const auto tokens = split_whitespace(line);
      if (!tokens.empty()) return tokens;
    }
    throw IoError(std::string("policy file ended before ") + what + ": " +
                  path);
  };

  auto expect_key = [&](const std::vector<std::string>& tokens,
                        const char* key) {
    if (tokens.front() != key) {
      throw IoError("expected '" + std::string(key) + "' line, found '" +
                    tokens.front() + "' in " + path);
    }
  };

  auto tokens = next_tokens("dims");
  expect_key(tokens, "dims");
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    policy.dims.push_back(static_cast<int>(parse_double(tokens[i])));
  }

  tokens = next_tokens("command_bound");
  expect_key(tokens, "command_bound");
  if (tokens.size() != 2) throw IoError("command_bound needs one value");
  policy.command_bound = parse_double(tokens[1]);

  tokens = next_tokens("zero_vertical");
  expect_key(tokens, "zero_vertical");
  if (tokens.size() != 2) throw IoError("zero_vertical needs one value");
  policy.zero_vertical = parse_double(tokens[1]) != 0.0;

  tokens = next_tokens("gravity_dir");
  expect_key(tokens, "gravity_dir");
  if (tokens.size() != 4) throw IoError("gravity_dir needs three values");
  policy.gravity_dir =
      Vec3d(parse_double(tokens[1]), parse_double(tokens[2]),
            parse_double(tokens[3]));

  tokens = next_tokens("values");
  expect_key(tokens, "values");
  if (tokens.size() != 2) throw IoError("values needs one count");
  const auto count = static_cast<Eigen::Index>(parse_double(tokens[1]));
  if (count < 0) throw IoError("negative value count in " + path);
  policy.values.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    tokens = next_tokens("weight value");
    if (tokens.size() != 1) {
      throw IoError("expected one weight per line in " + path);
    }
    policy.values[i] = parse_double(tokens[0]);
  }
  policy.validate();
  return policy;
}

}  // namespace spid::io

#endif  // SPID_IO_POLICY_IO_HPP_

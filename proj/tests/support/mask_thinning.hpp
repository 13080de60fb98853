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

#ifndef SPID_TESTS_SUPPORT_MASK_THINNING_HPP_
#define SPID_TESTS_SUPPORT_MASK_THINNING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spid/split/splitter.hpp"
#include "spid/vec.hpp"

namespace spid::testing {

// Binary mask rows, 1 = rope pixel.
using Mask = std::vector<std::vector<std::uint8_t>>;

// Parses a text grid: '1' or '#' marks a rope pixel, anything else is empty.
// Rows map to y, columns to x.
Mask parse_mask(const std::string& grid);

// Classic two-subiteration 8-neighbor thinning to a one-pixel-wide skeleton.
Mask thin_mask(Mask mask);

// Thins and collects rope pixels as (x, y) points; the pixel nearest to
// `attachment_hint` becomes point 0, the rest follow in row-major order.
split::SkeletonPoints skeleton_from_mask(const Mask& mask,
                                         const Vec2d& attachment_hint);

}  // namespace spid::testing

#endif  // SPID_TESTS_SUPPORT_MASK_THINNING_HPP_

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

#ifndef SPID_SPLIT_SPLITTER_HPP_
#define SPID_SPLIT_SPLITTER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "spid/errors.hpp"
#include "spid/vec.hpp"

namespace spid::split {

// Skeletonized 2-D rope pixels. Index 0 is the rope's attachment end; the
// remaining points may arrive in any order.
struct SkeletonPoints {
  std::vector<Vec2d> points;

  int size() const { return static_cast<int>(points.size()); }

  void validate() const {
    if (points.empty()) throw EmptyInputError("skeleton has no points");
    if (points.size() < 2) {
      throw InsufficientPointsError("skeleton needs >= 2 points");
    }
    for (const auto& p : points) {
      if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
        throw NonFiniteError("skeleton point is not finite");
      }
    }
    std::vector<Vec2d> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const Vec2d& a, const Vec2d& b) {
      return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i][0] == sorted[i - 1][0] && sorted[i][1] == sorted[i - 1][1]) {
        throw DimensionMismatchError("skeleton contains duplicate points");
      }
    }
  }
};

struct SpacingStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Ordered split points walked along the skeleton from the attachment end.
struct SplitResult {
  std::vector<Vec2d> points;
  std::vector<int> source_indices;  // skeleton index of each split point
  double d_min = 0.0;
  SpacingStats spacing;

  int size() const { return static_cast<int>(points.size()); }
};

enum class SplitMode { kBrute, kAccelerated };

namespace internal {

// Lexicographic (squared distance, index) winner among qualified candidates.
struct CandidateHit {
  double d2 = std::numeric_limits<double>::infinity();
  int index = -1;
};

// Candidate constraints for the next split point, relative to the current
// query point and (after the first step) the previous split. Both search
// modes consider candidates through this one object so their accept/reject
// arithmetic matches bit for bit, ties included: the winner is the
// lexicographic (squared distance, index) minimum.
struct CandidateFilter {
  double qx;
  double qy;
  double d_min2;
  double px = 0.0;
  double py = 0.0;
  bool has_prev = false;

  CandidateFilter(const Vec2d& query, double d_min_squared, const Vec2d* prev)
      : qx(query[0]), qy(query[1]), d_min2(d_min_squared) {
    if (prev != nullptr) {
      px = (*prev)[0];
      py = (*prev)[1];
      has_prev = true;
    }
  }

  void consider(double x, double y, int index, CandidateHit& best) const {
    const double dx = x - qx;
    const double dy = y - qy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < d_min2) return;
    if (d2 > best.d2 || (d2 == best.d2 && index > best.index)) return;
    if (has_prev) {
      const double ex = x - px;
      const double ey = y - py;
      if (!(d2 < ex * ex + ey * ey)) return;
    }
    best.d2 = d2;
    best.index = index;
  }
};

inline CandidateHit brute_nearest(const std::vector<Vec2d>& points,
                                  const CandidateFilter& filter) {
  CandidateHit best;
  for (std::size_t j = 0; j < points.size(); ++j) {
    filter.consider(points[j][0], points[j][1], static_cast<int>(j), best);
  }
  return best;
}

// 2-D KD tree rebuilt per frame: median plane splits on the widest axis of
// the (plane-clipped) cell, points bucketed into small contiguous leaves so
// a leaf scan is as tight as the brute loop. The search keeps the squared
// distance from the query to the current cell incrementally and prunes a
// far child only when that bound strictly exceeds the best squared distance
// found, so equal-distance candidates are always reached and the
// lowest-index tie break stays exact. The d_min constraint is applied per
// point; disqualified near-field points are skipped during leaf scans.
class KdTree2 {
 public:
  explicit KdTree2(const std::vector<Vec2d>& points) {
    entries_.reserve(points.size());
    double lo[2] = {0.0, 0.0};
    double hi[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double x = points[i][0];
      const double y = points[i][1];
      if (i == 0) {
        lo[0] = hi[0] = x;
        lo[1] = hi[1] = y;
      } else {
        lo[0] = std::min(lo[0], x);
        lo[1] = std::min(lo[1], y);
        hi[0] = std::max(hi[0], x);
        hi[1] = std::max(hi[1], y);
      }
      entries_.push_back(Entry{x, y, static_cast<int>(i)});
    }
    root_lo_[0] = lo[0];
    root_lo_[1] = lo[1];
    root_hi_[0] = hi[0];
    root_hi_[1] = hi[1];
    nodes_.reserve(entries_.size() / kLeafSize * 2 + 2);
    if (!entries_.empty()) {
      root_ = build(0, static_cast<int>(entries_.size()), lo, hi);
    }
  }

  CandidateHit nearest_qualified(const CandidateFilter& filter) const {
    CandidateHit best;
    if (root_ < 0) return best;
    const double q[2] = {filter.qx, filter.qy};
    double off[2];
    double rd = 0.0;
    for (int a = 0; a < 2; ++a) {
      off[a] = q[a] < root_lo_[a]
                   ? q[a] - root_lo_[a]
                   : (q[a] > root_hi_[a] ? q[a] - root_hi_[a] : 0.0);
      rd += off[a] * off[a];
    }
    search(root_, filter, q, off, rd, best);
    return best;
  }

 private:
  static constexpr int kLeafSize = 32;

  struct Entry {
    double x;
    double y;
    int index;
  };

  struct Node {
    double split = 0.0;
    int axis = 0;
    int left = -1;   // < 0 marks a leaf
    int right = -1;
    int begin = 0;   // leaf range into entries_
    int end = 0;
  };

  int build(int begin, int end, double lo[2], double hi[2]) {
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{});
    if (end - begin <= kLeafSize) {
      nodes_[static_cast<std::size_t>(self)].begin = begin;
      nodes_[static_cast<std::size_t>(self)].end = end;
      return self;
    }
    const int axis = hi[0] - lo[0] >= hi[1] - lo[1] ? 0 : 1;
    const int mid = begin + (end - begin) / 2;
    std::nth_element(entries_.begin() + begin, entries_.begin() + mid,
                     entries_.begin() + end,
                     [axis](const Entry& a, const Entry& b) {
                       return axis == 0 ? a.x < b.x : a.y < b.y;
                     });
    const Entry& pivot = entries_[static_cast<std::size_t>(mid)];
    const double split = axis == 0 ? pivot.x : pivot.y;
    nodes_[static_cast<std::size_t>(self)].split = split;
    nodes_[static_cast<std::size_t>(self)].axis = axis;

    const double saved_hi = hi[axis];
    hi[axis] = split;
    const int left = build(begin, mid, lo, hi);
    hi[axis] = saved_hi;
    const double saved_lo = lo[axis];
    lo[axis] = split;
    const int right = build(mid, end, lo, hi);
    lo[axis] = saved_lo;

    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
  }

  void search(int idx, const CandidateFilter& filter, const double q[2],
              double off[2], double rd, CandidateHit& best) const {
    const Node& node = nodes_[static_cast<std::size_t>(idx)];
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const Entry& e = entries_[static_cast<std::size_t>(i)];
        filter.consider(e.x, e.y, e.index, best);
      }
      return;
    }

    const double diff = q[node.axis] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, filter, q, off, rd, best);

    const double old_off = off[node.axis];
    const double far_rd = rd - old_off * old_off + diff * diff;
    if (far_rd > best.d2) return;  // strictly worse than best, ties kept
    off[node.axis] = diff;
    search(far, filter, q, off, far_rd, best);
    off[node.axis] = old_off;
  }

  std::vector<Entry> entries_;
  std::vector<Node> nodes_;
  double root_lo_[2] = {0.0, 0.0};
  double root_hi_[2] = {0.0, 0.0};
  int root_ = -1;
};

inline SpacingStats spacing_stats(const std::vector<Vec2d>& points) {
  SpacingStats stats;
  if (points.size() < 2) return stats;
  stats.min = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = (points[i] - points[i - 1]).norm();
    stats.min = std::min(stats.min, d);
    stats.max = std::max(stats.max, d);
    total += d;
  }
  stats.mean = total / static_cast<double>(points.size() - 1);
  return stats;
}

}  // namespace internal

// Walks the skeleton from the attachment end, repeatedly taking the closest
// point at least d_min away from the current split and strictly closer to it
// than to the previous split (so the walk cannot turn back). Stops when no
// candidate qualifies. Equidistant candidates resolve to the lowest skeleton
// index, so both modes return identical results. A walk longer than the
// point count has revisited a point, which only self-crossing skeletons can
// cause; the walk stops there rather than cycling.
//
// Emptiness and finiteness are checked here; the duplicate-point invariant
// is the caller's (readers validate on load) since exact duplicates only
// tie and resolve by index, identically in both modes.
inline SplitResult split_rope(const SkeletonPoints& skeleton, double d_min,
                              SplitMode mode) {
  if (skeleton.points.empty()) throw EmptyInputError("skeleton has no points");
  if (skeleton.points.size() < 2) {
    throw InsufficientPointsError("skeleton needs >= 2 points");
  }
  for (const auto& p : skeleton.points) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
      throw NonFiniteError("skeleton point is not finite");
    }
  }
  if (!(d_min > 0.0) || !std::isfinite(d_min)) {
    throw ConfigError("splitting distance must be positive");
  }
  const std::vector<Vec2d>& pts = skeleton.points;
  const double d_min2 = d_min * d_min;

  SplitResult out;
  out.d_min = d_min;
  out.points.push_back(pts[0]);
  out.source_indices.push_back(0);

  std::optional<internal::KdTree2> tree;
  if (mode == SplitMode::kAccelerated) tree.emplace(pts);

  const std::size_t max_points = pts.size() + 1;
  while (out.points.size() < max_points) {
    const Vec2d& current = out.points.back();
    const Vec2d* prev =
        out.points.size() >= 2 ? &out.points[out.points.size() - 2] : nullptr;
    const internal::CandidateFilter filter(current, d_min2, prev);
    const internal::CandidateHit hit =
        mode == SplitMode::kBrute ? internal::brute_nearest(pts, filter)
                                  : tree->nearest_qualified(filter);
    if (hit.index < 0) break;
    out.points.push_back(pts[hit.index]);
    out.source_indices.push_back(hit.index);
  }
  out.spacing = internal::spacing_stats(out.points);
  return out;
}

// Thins a finer walk down to `count` points at equal index strides, keeping
// the first and last. Striding a higher-fidelity walk follows curvature more
// faithfully than splitting coarsely outright.
inline SplitResult equalize_splits(const SplitResult& fine, int count) {
  const int available = fine.size();
  if (count < 2) {
    throw InsufficientPointsError("equalized walk needs >= 2 points");
  }
  if (available < count) {
    throw InsufficientPointsError("fine walk has fewer points than requested");
  }
  SplitResult out;
  out.d_min = fine.d_min;
  out.points.reserve(count);
  out.source_indices.reserve(count);
  for (int k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(std::llround(
        static_cast<double>(k) * static_cast<double>(available - 1) /
        static_cast<double>(count - 1)));
    out.points.push_back(fine.points[idx]);
    out.source_indices.push_back(fine.source_indices[idx]);
  }
  out.spacing = internal::spacing_stats(out.points);
  return out;
}

// Convenience for node extraction: walk at d_min / fine_factor fidelity,
// then equalize down to node_count points.
inline SplitResult split_equalized(const SkeletonPoints& skeleton,
                                   double d_min, int node_count,
                                   SplitMode mode, int fine_factor = 4) {
  if (fine_factor < 1) throw ConfigError("fine factor must be >= 1");
  const SplitResult fine =
      split_rope(skeleton, d_min / static_cast<double>(fine_factor), mode);
  return equalize_splits(fine, node_count);
}

}  // namespace spid::split

#endif  // SPID_SPLIT_SPLITTER_HPP_

// Copyright 2026 The kitsfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// 3D convex hull of lattice points with exact integer predicates.
//
// Hull merging works on voxel centers. Voxel index coordinates map to mm by
// a per-axis positive scale and offset, an affine map that preserves
// convexity and point-in-hull membership, so the hull is built and queried
// in index space where every predicate is an exact int64 computation.

#ifndef KITSFUSE_CONVEX_HULL_HPP_
#define KITSFUSE_CONVEX_HULL_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kitsfuse/types.hpp"

namespace kitsfuse {

/// Closed half-space dot(normal, p) <= offset.
struct HalfSpace {
  std::array<std::int64_t, 3> normal{};
  std::int64_t offset = 0;

  std::int64_t excess(const Index3& p) const noexcept {
    return normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2] - offset;
  }
};

class ConvexHull3 {
 public:
  /// Hull of `points`, or nullopt when they do not span three dimensions
  /// (fewer than four points, or all coplanar). Coordinates must fit in
  /// +/-2^20.
  static std::optional<ConvexHull3> build(std::span<const Index3> points);

  /// Outward-facing triangle planes; a point is inside iff it satisfies all.
  const std::vector<HalfSpace>& facets() const noexcept { return facets_; }
  /// Input points that are corners of the hull (triangle vertices).
  const std::vector<Index3>& vertices() const noexcept { return vertices_; }

  bool contains(const Index3& p) const noexcept;

  /// Inclusive range of integer x such that (x, y, z) is inside the hull,
  /// or nullopt when the row misses it.
  std::optional<std::pair<std::int64_t, std::int64_t>> row_span(
      std::int64_t y, std::int64_t z) const noexcept;

 private:
  std::vector<HalfSpace> facets_;
  std::vector<Index3> vertices_;
};

/// Affine dimension of a point set: 0 (single point), 1 (collinear),
/// 2 (coplanar) or 3. Empty input returns -1.
int affine_dimension(std::span<const Index3> points);

}  // namespace kitsfuse

#endif  // KITSFUSE_CONVEX_HULL_HPP_

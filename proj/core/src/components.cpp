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

#include "kitsfuse/components.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace kitsfuse {
namespace {

// Neighbours already visited by an x-fastest raster scan: 3 for face
// connectivity, 13 for full 26-connectivity.
constexpr std::array<Index3, 3> kBackward6 = {{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};

constexpr std::array<Index3, 13> kBackward26 = {{
    {-1, -1, -1}, {0, -1, -1}, {1, -1, -1},
    {-1, 0, -1},  {0, 0, -1},  {1, 0, -1},
    {-1, 1, -1},  {0, 1, -1},  {1, 1, -1},
    {-1, -1, 0},  {0, -1, 0},  {1, -1, 0},
    {-1, 0, 0},
}};

class UnionFind {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller provisional label as root so the root is the
    // earliest-created label of the set.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

template <std::size_t N>
void first_pass(const BinaryMask& mask, const std::array<Index3, N>& offsets,
                std::vector<std::uint32_t>& provisional, UnionFind& uf) {
  const Geometry& g = mask.geometry();
  constexpr std::uint32_t kNone = 0xffffffffU;
  std::size_t i = 0;
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x, ++i) {
        if (!mask.test(i)) {
          provisional[i] = kNone;
          continue;
        }
        std::uint32_t label = kNone;
        for (const auto& d : offsets) {
          const std::int64_t nx = x + d[0];
          const std::int64_t ny = y + d[1];
          const std::int64_t nz = z + d[2];
          if (!g.contains(nx, ny, nz)) continue;
          const std::uint32_t other = provisional[g.linear_index(nx, ny, nz)];
          if (other == kNone) continue;
          if (label == kNone) {
            label = other;
          } else if (other != label) {
            uf.unite(label, other);
          }
        }
        provisional[i] = label == kNone ? uf.make() : label;
      }
    }
  }
}

}  // namespace

std::string_view connectivity_name(Connectivity c) {
  return c == Connectivity::kFace6 ? "6" : "26";
}

ComponentLabeling::ComponentLabeling(Geometry geometry,
                                     std::vector<std::uint32_t> ids,
                                     std::vector<ComponentInfo> components)
    : geometry_(std::move(geometry)),
      ids_(std::move(ids)),
      components_(std::move(components)) {
  if (ids_.size() != geometry_.voxel_count()) {
    throw Error(ErrorCode::kSizeMismatch, "component id grid size mismatch");
  }
}

BinaryMask ComponentLabeling::component_mask(std::uint32_t id) const {
  std::vector<std::uint8_t> out(ids_.size());
  std::transform(ids_.begin(), ids_.end(), out.begin(), [id](std::uint32_t v) {
    return static_cast<std::uint8_t>(v == id);
  });
  return BinaryMask(geometry_, std::move(out));
}

ComponentLabeling label_components(const BinaryMask& mask, Connectivity conn) {
  const Geometry& g = mask.geometry();
  std::vector<std::uint32_t> ids(g.voxel_count());
  UnionFind uf;
  if (conn == Connectivity::kFace6) {
    first_pass(mask, kBackward6, ids, uf);
  } else {
    first_pass(mask, kBackward26, ids, uf);
  }

  // Final ids in order of first appearance in the raster scan, which is the
  // order of each component's smallest linear index.
  std::vector<std::uint32_t> final_id(uf.size(), 0);
  std::vector<ComponentInfo> components;
  const double voxel_mm3 = g.voxel_volume_mm3();
  std::size_t i = 0;
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x, ++i) {
        if (!mask.test(i)) {
          ids[i] = 0;
          continue;
        }
        const std::uint32_t root = uf.find(ids[i]);
        std::uint32_t& id = final_id[root];
        if (id == 0) {
          components.push_back({});
          id = static_cast<std::uint32_t>(components.size());
          auto& c = components.back();
          c.id = id;
          c.first_voxel = i;
          c.bbox = {{x, y, z}, {x, y, z}};
        }
        ids[i] = id;
        auto& c = components[id - 1];
        ++c.voxel_count;
        c.bbox.min = {std::min(c.bbox.min[0], x), std::min(c.bbox.min[1], y),
                      std::min(c.bbox.min[2], z)};
        c.bbox.max = {std::max(c.bbox.max[0], x), std::max(c.bbox.max[1], y),
                      std::max(c.bbox.max[2], z)};
      }
    }
  }
  for (auto& c : components) c.volume_mm3 = static_cast<double>(c.voxel_count) * voxel_mm3;
  return ComponentLabeling(g, std::move(ids), std::move(components));
}

double dice_from_counts(std::size_t intersection, std::size_t size_a,
                        std::size_t size_b) noexcept {
  if (size_a + size_b == 0) return 1.0;
  return 2.0 * static_cast<double>(intersection) /
         static_cast<double>(size_a + size_b);
}

double binary_dice(const BinaryMask& a, const BinaryMask& b) {
  require_same_geometry(a.geometry(), b.geometry(), "binary_dice");
  const auto da = a.data();
  const auto db = b.data();
  std::size_t na = 0;
  std::size_t nb = 0;
  std::size_t both = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    na += da[i];
    nb += db[i];
    both += da[i] & db[i];
  }
  return dice_from_counts(both, na, nb);
}

LabelVolume filter_min_volume(const LabelVolume& labels, double threshold_mm3,
                              Connectivity conn) {
  if (!(threshold_mm3 >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "minimum volume must be >= 0, got " + std::to_string(threshold_mm3));
  }
  const auto cc = label_components(foreground_mask(labels), conn);
  std::vector<std::uint8_t> keep(cc.count() + 1, 1);
  bool any_removed = false;
  for (const auto& c : cc.components()) {
    if (c.volume_mm3 < threshold_mm3) {
      keep[c.id] = 0;
      any_removed = true;
    }
  }
  if (!any_removed) return labels;
  std::vector<std::uint8_t> out(labels.data().begin(), labels.data().end());
  const auto ids = cc.ids();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (ids[i] != 0 && !keep[ids[i]]) out[i] = kBackground;
  }
  return LabelVolume(labels.geometry(), std::move(out));
}

}  // namespace kitsfuse

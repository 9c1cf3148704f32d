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

// Connected-component labeling of binary masks and the blob-level
// primitives built on it.

#ifndef KITSFUSE_COMPONENTS_HPP_
#define KITSFUSE_COMPONENTS_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "kitsfuse/types.hpp"

namespace kitsfuse {

enum class Connectivity {
  kFace6,     // shared face
  kVertex26,  // shared face, edge or corner
};

std::string_view connectivity_name(Connectivity c);

struct BoundingBox {
  Index3 min{};
  Index3 max{};  // inclusive
};

struct ComponentInfo {
  std::uint32_t id = 0;
  std::size_t voxel_count = 0;
  double volume_mm3 = 0.0;
  BoundingBox bbox;
  /// Smallest linear index in the component; components are numbered in
  /// increasing order of this value.
  std::size_t first_voxel = 0;
};

class ComponentLabeling {
 public:
  ComponentLabeling(Geometry geometry, std::vector<std::uint32_t> ids,
                    std::vector<ComponentInfo> components);

  const Geometry& geometry() const noexcept { return geometry_; }
  /// Per-voxel component id, 0 for background, otherwise 1..K.
  std::span<const std::uint32_t> ids() const noexcept { return ids_; }
  std::uint32_t id_at(std::size_t linear) const noexcept { return ids_[linear]; }
  /// components()[k] describes id k + 1.
  const std::vector<ComponentInfo>& components() const noexcept {
    return components_;
  }
  std::size_t count() const noexcept { return components_.size(); }

  /// Binary mask of a single component.
  BinaryMask component_mask(std::uint32_t id) const;

 private:
  Geometry geometry_;
  std::vector<std::uint32_t> ids_;
  std::vector<ComponentInfo> components_;
};

ComponentLabeling label_components(const BinaryMask& mask, Connectivity conn);

/// 2|a ∩ b| / (|a| + |b|); 1.0 when both are empty.
double binary_dice(const BinaryMask& a, const BinaryMask& b);

/// Dice from counts with the same empty convention.
double dice_from_counts(std::size_t intersection, std::size_t size_a,
                        std::size_t size_b) noexcept;

/// Sets to background every blob of the whole-foreground mask whose volume
/// is strictly below `threshold_mm3`.
LabelVolume filter_min_volume(const LabelVolume& labels, double threshold_mm3,
                              Connectivity conn);

}  // namespace kitsfuse

#endif  // KITSFUSE_COMPONENTS_HPP_

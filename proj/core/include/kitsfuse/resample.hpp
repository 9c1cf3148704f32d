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

// Grid-to-grid resampling with voxel-center alignment: voxel i of an axis
// with spacing s is centered at (i + 0.5) * s mm, and both grids share the
// corner of voxel 0 as origin. Images use trilinear interpolation with
// edge clamping, labels use nearest neighbour.

#ifndef KITSFUSE_RESAMPLE_HPP_
#define KITSFUSE_RESAMPLE_HPP_

#include <optional>
#include <string_view>
#include <variant>

#include "kitsfuse/types.hpp"

namespace kitsfuse {

/// Low-resolution network grid.
inline constexpr Spacing3 kLowResSpacing = {1.84, 1.84, 2.36};
/// Full-resolution network grid.
inline constexpr Spacing3 kFullResSpacing = {0.78, 0.78, 1.0};

/// Either a target spacing (shape derived from the input extent) or a
/// complete target geometry.
class TargetSpec {
 public:
  static TargetSpec with_spacing(const Spacing3& spacing);
  static TargetSpec with_geometry(const Geometry& geometry);
  static TargetSpec lowres() { return with_spacing(kLowResSpacing); }
  static TargetSpec fullres() { return with_spacing(kFullResSpacing); }
  /// "lowres", "fullres", or three numbers "x,y,z".
  static TargetSpec parse(std::string_view text);

  /// Geometry of the output for an input of geometry `input`.
  Geometry resolve(const Geometry& input) const;

 private:
  explicit TargetSpec(std::variant<Spacing3, Geometry> target)
      : target_(std::move(target)) {}
  std::variant<Spacing3, Geometry> target_;
};

/// round_half_up(input_extent * input_spacing / target_spacing), >= 1.
Shape3 resampled_shape(const Geometry& input, const Spacing3& target_spacing);

ImageVolume resample_image(const ImageVolume& volume, const TargetSpec& spec);
LabelVolume resample_labels(const LabelVolume& labels, const TargetSpec& spec);

}  // namespace kitsfuse

#endif  // KITSFUSE_RESAMPLE_HPP_

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

// Intensity normalization, dataset foreground statistics and patch
// sampling with foreground oversampling.

#ifndef KITSFUSE_PREPROCESS_HPP_
#define KITSFUSE_PREPROCESS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kitsfuse/types.hpp"

namespace kitsfuse {

/// Clip window and z-score moments, all in HU.
class IntensityStats {
 public:
  /// Throws kDegenerateStats unless clip_low < clip_high and std > 0.
  IntensityStats(double clip_low, double clip_high, double mean, double std);

  /// Foreground statistics of the KiTS23 training set: clip [-58, 302],
  /// mean 103, std 73.3.
  static IntensityStats kits23() { return {-58.0, 302.0, 103.0, 73.3}; }

  double clip_low() const noexcept { return clip_low_; }
  double clip_high() const noexcept { return clip_high_; }
  double mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }

  /// (clamp(v, clip_low, clip_high) - mean) / std
  double normalize(double v) const noexcept;

  /// `key = value` text with keys clip_low, clip_high, mean, std.
  std::string to_text() const;
  static IntensityStats from_text(std::string_view text);

 private:
  double clip_low_;
  double clip_high_;
  double mean_;
  double std_;
};

/// Percentile by linear interpolation between closest ranks: for sorted
/// values v[0..n-1], rank r = p / 100 * (n - 1) and the result is
/// v[floor(r)] + (r - floor(r)) * (v[floor(r) + 1] - v[floor(r)]).
/// `sorted` must be ascending and non-empty; p in [0, 100].
double percentile_sorted(std::span<const double> sorted, double p);

/// Pools the intensities of every voxel with label != 0 over all cases and
/// returns the 0.5 / 99.5 percentiles and the mean / population standard
/// deviation. Throws kNoForeground when no case has foreground and
/// kDegenerateStats when the pooled values are constant.
IntensityStats compute_foreground_stats(
    std::span<const std::pair<ImageVolume, LabelVolume>> cases);

ImageVolume clip_and_normalize(const ImageVolume& volume,
                               const IntensityStats& stats);

struct PatchSpec {
  Shape3 size = {128, 128, 128};
  double oversample_fraction = 1.0 / 3.0;

  /// Throws kInvalidArgument on a non-positive size or a fraction outside
  /// [0, 1].
  void validate() const;
};

struct Patch {
  ImageVolume image;
  LabelVolume labels;
  /// Position of the patch's voxel 0 in the source volume. May be negative
  /// or run past the far edge; the outside is padded with 0 / background.
  Index3 origin;
  /// True when this patch was placed around a sampled foreground voxel.
  bool foreground_forced = false;
  /// Class code the forced patch was placed around, 0 for uniform patches.
  std::uint8_t forced_class = 0;
};

struct PatchBatch {
  std::vector<Patch> patches;
  /// False when the case has no foreground, so every patch was drawn
  /// uniformly regardless of the oversampling fraction.
  bool foreground_available = true;
  std::size_t forced_count = 0;
};

/// Draws `count` patches. The first ceil(count * oversample_fraction) are
/// placed so they contain a voxel of a foreground class picked uniformly
/// among the classes present; the rest are placed uniformly. Deterministic
/// for a given seed.
PatchBatch sample_patches(const ImageVolume& volume, const LabelVolume& labels,
                          const PatchSpec& spec, std::size_t count,
                          std::uint64_t seed);

/// Image/label pair cut from `volume` and `labels` at `origin`, padded
/// outside the source.
Patch extract_patch(const ImageVolume& volume, const LabelVolume& labels,
                    const Index3& origin, const Shape3& size);

struct AugmentOps {
  bool mirror_x = false;
  bool mirror_y = false;
  bool mirror_z = false;
  /// Quarter turn in the x/y plane: (x, y) -> (ny - 1 - y, x). Swaps the
  /// x and y extents.
  bool rot90_xy = false;
};

/// Applies the selected ops in the order mirror_x, mirror_y, mirror_z,
/// rot90_xy to both volumes identically.
std::pair<ImageVolume, LabelVolume> augment_patch(const ImageVolume& image,
                                                  const LabelVolume& labels,
                                                  const AugmentOps& ops);

/// Draws each op with probability 1/2 from `seed`.
AugmentOps random_augment_ops(std::uint64_t seed);

}  // namespace kitsfuse

#endif  // KITSFUSE_PREPROCESS_HPP_

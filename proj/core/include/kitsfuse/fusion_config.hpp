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

#ifndef KITSFUSE_FUSION_CONFIG_HPP_
#define KITSFUSE_FUSION_CONFIG_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>

#include "kitsfuse/components.hpp"

namespace kitsfuse {

enum class ConflictRule {
  /// Where both predictions are foreground the full-resolution class is kept.
  kFullResWins,
};

/// Class given to tumor voxels rejected by the cross-scale filter.
enum class TumorRelabel { kBackground, kKidney };

struct FusionSteps {
  bool gate = true;
  bool tumor_filter = true;
  bool join = true;
  bool hull_merge = true;
  bool min_volume = true;
};

/// Order in which postprocess_pair applies the steps.
inline constexpr std::array<std::string_view, 5> kFusionStepOrder = {
    "gate", "tumor_filter", "join", "hull_merge", "min_volume"};

/// Tunables of the multi-scale post-processing.
///
/// Text form, one `key = value` per line ('#' comments allowed):
///
///   tumor_dice_threshold      = 0.3        tumors survive iff Dice > this
///   min_volume_mm3            = 10000      blobs below this are removed
///   connectivity              = 26         6 | 26
///   gate                      = true       per-step toggles
///   tumor_filter              = true
///   join                      = true
///   hull_merge                = true
///   min_volume                = true
///   conflict_rule             = full_res_wins
///   tumor_fp_relabel          = background background | kidney
///   gate_min_overlap_fraction = 0          0 keeps any blob with >= 1
///                                          supported voxel
///   step_order = gate,tumor_filter,join,hull_merge,min_volume  (read-only)
///
/// Unknown keys are rejected.
struct FusionConfig {
  double tumor_dice_threshold = 0.3;
  double min_volume_mm3 = 10000.0;
  Connectivity connectivity = Connectivity::kVertex26;
  FusionSteps steps;
  ConflictRule conflict_rule = ConflictRule::kFullResWins;
  TumorRelabel tumor_fp_relabel = TumorRelabel::kBackground;
  double gate_min_overlap_fraction = 0.0;

  /// Throws Error(kConfig) on out-of-range values.
  void validate() const;

  std::string to_text() const;
  static FusionConfig from_text(std::string_view text);
  static FusionConfig load(const std::filesystem::path& path);
};

}  // namespace kitsfuse

#endif  // KITSFUSE_FUSION_CONFIG_HPP_

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

// Multi-scale fusion of a full-resolution and a low-resolution label map.
//
// postprocess_pair runs, in order:
//   1. gate          drop full-res blobs with no low-res foreground support
//   2. tumor_filter  keep a tumor blob only if some tumor blob of the other
//                    scale overlaps it with Dice > threshold
//   3. join          union of both foregrounds, full-res class on conflict
//   4. hull_merge    foreground inside each tumor blob's convex hull
//                    becomes tumor
//   5. min_volume    drop foreground blobs below the volume threshold

#ifndef KITSFUSE_FUSION_HPP_
#define KITSFUSE_FUSION_HPP_

#include <span>

#include "kitsfuse/components.hpp"
#include "kitsfuse/fusion_config.hpp"
#include "kitsfuse/types.hpp"

namespace kitsfuse {

/// Keeps each whole-foreground blob of `full` that shares at least one voxel
/// with the foreground of `low_on_full_grid` (and, when
/// min_overlap_fraction > 0, whose supported share of voxels reaches that
/// fraction). Everything else becomes background.
LabelVolume gate_by_lowres(const LabelVolume& full,
                           const LabelVolume& low_on_full_grid,
                           Connectivity conn,
                           double min_overlap_fraction = 0.0);

struct TumorFilterResult {
  LabelVolume full;
  LabelVolume low;
  std::size_t removed_full = 0;  // tumor components rejected in each map
  std::size_t removed_low = 0;
};

TumorFilterResult tumor_cross_scale_filter(const LabelVolume& full,
                                           const LabelVolume& low_on_full_grid,
                                           const FusionConfig& cfg);

LabelVolume join_predictions(const LabelVolume& full,
                             const LabelVolume& low_on_full_grid,
                             const FusionConfig& cfg);

/// Relabels to tumor every foreground voxel whose center lies in the convex
/// hull of a tumor component. Background is never touched. Components that
/// are flat or thinner (coplanar centers) are left as they are.
LabelVolume hull_merge_tumor(const LabelVolume& labels, Connectivity conn);

/// Full pipeline. `low` is first resampled (nearest neighbour) onto the
/// geometry of `full`.
LabelVolume postprocess_pair(const LabelVolume& full, const LabelVolume& low,
                             const FusionConfig& cfg);

/// Left fold of join_predictions: the running result plays the
/// full-resolution role against each next element.
LabelVolume ensemble_join(std::span<const LabelVolume> results,
                          const FusionConfig& cfg);

}  // namespace kitsfuse

#endif  // KITSFUSE_FUSION_HPP_

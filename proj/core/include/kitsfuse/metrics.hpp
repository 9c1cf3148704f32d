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

// Hierarchical-region Dice and Surface Dice.
//
// A region's surface is the set of voxel faces separating an in-region
// voxel from an out-of-region or out-of-bounds neighbour, each represented
// by its center point in mm. Surface Dice at tolerance t is
//
//   (#pred faces within t of a gt face + #gt faces within t of a pred face)
//   / (#pred faces + #gt faces)
//
// with 1.0 when both surfaces are empty and 0.0 when only one is.

#ifndef KITSFUSE_METRICS_HPP_
#define KITSFUSE_METRICS_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "kitsfuse/types.hpp"

namespace kitsfuse {

using Point3 = std::array<double, 3>;

/// Boundary face centers of a mask, in raster order of the owning voxel and
/// then -x, +x, -y, +y, -z, +z.
std::vector<Point3> boundary_faces(const BinaryMask& mask);

double region_dice(const LabelVolume& pred, const LabelVolume& gt, Region region);

double surface_dice(const LabelVolume& pred, const LabelVolume& gt,
                    Region region, double tolerance_mm);

/// Surface Dice of two binary masks.
double mask_surface_dice(const BinaryMask& pred, const BinaryMask& gt,
                         double tolerance_mm);

struct RegionScores {
  double dice = 0.0;
  double surface_dice = 0.0;
};

struct CaseReport {
  std::string case_id;
  /// Indexed like kAllRegions: kidney_and_masses, masses, tumor.
  std::array<RegionScores, 3> regions{};
};

CaseReport evaluate_case(const LabelVolume& pred, const LabelVolume& gt,
                         double tolerance_mm, std::string case_id = {});

struct MetricsSummary {
  std::size_t cases = 0;
  std::array<double, 3> mean_dice{};
  std::array<double, 3> mean_surface_dice{};
  /// Mean over the three regions of the per-region means.
  double overall_dice = 0.0;
  double overall_surface_dice = 0.0;
};

/// Throws kEmptyInput for an empty sequence.
MetricsSummary aggregate(std::span<const CaseReport> reports);

/// Tab-separated table: header row, then one row per case.
std::string format_case_table(std::span<const CaseReport> reports);
/// Tab-separated `metric region value` rows.
std::string format_summary(const MetricsSummary& summary);

}  // namespace kitsfuse

#endif  // KITSFUSE_METRICS_HPP_

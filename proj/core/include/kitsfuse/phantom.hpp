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

// Synthetic kidney phantoms and controlled prediction corruptions.
//
// Labels come from exact point-in-primitive tests at voxel centers (tumor
// overrides cyst overrides kidney). Intensities are per-class constants
// plus Gaussian noise; they are arbitrary test values, not a CT model.

#ifndef KITSFUSE_PHANTOM_HPP_
#define KITSFUSE_PHANTOM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kitsfuse/metrics.hpp"
#include "kitsfuse/resample.hpp"
#include "kitsfuse/types.hpp"

namespace kitsfuse {

inline constexpr float kPhantomBackgroundHu = -50.0F;
inline constexpr float kPhantomKidneyHu = 120.0F;
inline constexpr float kPhantomTumorHu = 90.0F;
inline constexpr float kPhantomCystHu = 10.0F;

struct Ellipsoid {
  Point3 center_mm{};
  Point3 radii_mm{};
  bool contains(const Point3& p) const noexcept;
};

struct Sphere {
  Point3 center_mm{};
  double radius_mm = 0.0;
  bool contains(const Point3& p) const noexcept;
};

struct PhantomSpec {
  Shape3 shape = {128, 112, 80};
  Spacing3 spacing = {1.25, 1.25, 1.5};
  std::vector<Ellipsoid> kidneys;
  std::vector<Sphere> tumors;
  std::vector<Sphere> cysts;
  double noise_std_hu = 10.0;
  std::uint64_t seed = 0;

  /// Every primitive must lie inside the volume extent and every tumor/cyst
  /// center inside some kidney. Throws kInvalidArgument otherwise.
  void validate() const;

  /// Two kidneys, one tumor, one cyst on a 128x112x80 grid.
  static PhantomSpec standard(std::uint64_t seed = 0);
  /// Small randomized phantom (48x40x32 voxels at 2x2x2.5 mm) with one or
  /// two kidneys, up to two well-separated tumors and up to two cysts.
  static PhantomSpec random(std::uint64_t seed);
};

struct Phantom {
  ImageVolume image;
  LabelVolume labels;
};

Phantom generate_phantom(const PhantomSpec& spec);

struct FpTumorSpec {
  std::size_t count = 0;
  double radius_min_mm = 3.0;
  double radius_max_mm = 5.0;
};

struct DegradeSpec {
  /// Round-trip through the low-resolution grid (nearest neighbour).
  bool downsample_to_lowres = false;
  Spacing3 lowres_spacing = kLowResSpacing;
  /// Tumor spheres placed in background, at least one voxel away from any
  /// foreground so each forms its own component.
  FpTumorSpec add_fp_tumor;
  /// Whole-foreground erosion steps (6-neighbourhood).
  int erode_boundary_steps = 0;
  /// Tumor voxels become background.
  bool drop_tumor = false;
  std::uint64_t seed = 0;

  void validate() const;
  bool is_identity() const noexcept;
};

struct DegradeResult {
  LabelVolume labels;
  std::size_t fp_components = 0;
  std::size_t fp_voxels = 0;
};

/// Applies, in order: downsample round-trip, erosion, tumor drop, false
/// positive tumors.
DegradeResult degrade_with_report(const LabelVolume& labels,
                                  const DegradeSpec& spec);
LabelVolume degrade(const LabelVolume& labels, const DegradeSpec& spec);

enum class PredictionGrid { kFull, kLowRes };

/// A phantom plus two degraded "network outputs".
struct ScenarioSpec {
  std::string name = "custom";
  PhantomSpec phantom;
  DegradeSpec full;
  DegradeSpec low;
  /// Grid of the emitted low-resolution prediction.
  PredictionGrid low_grid = PredictionGrid::kLowRes;

  /// Built-in scenarios: "consistent", "fp_tumors", "missing_tumor".
  static ScenarioSpec named(std::string_view name, std::uint64_t seed = 0);

  /// Text form, `key = value` lines:
  ///   name, shape, spacing_mm, seed, noise_std_hu
  ///   kidney = cx cy cz rx ry rz       (repeatable, mm)
  ///   tumor  = cx cy cz r              (repeatable)
  ///   cyst   = cx cy cz r              (repeatable)
  ///   full.downsample_to_lowres, full.add_fp_tumor = count rmin rmax,
  ///   full.erode_boundary, full.drop_tumor, full.seed (same for low.)
  ///   low.grid = lowres | full
  /// A file holding only `scenario = <builtin>` (and optionally seed)
  /// expands to the built-in.
  static ScenarioSpec from_text(std::string_view text);
  std::string to_text() const;
};

struct ScenarioOutput {
  Phantom truth;
  LabelVolume full_prediction;
  LabelVolume low_prediction;
  std::size_t full_fp_voxels = 0;
  std::size_t full_fp_components = 0;
  /// Tumor Dice of the full prediction against the truth predicted from
  /// the known false-positive volume, 2T / (2T + F). Set when the full
  /// prediction differs from the truth only by added false positives.
  std::optional<double> expected_full_tumor_dice;
};

ScenarioOutput generate_scenario(const ScenarioSpec& spec);

}  // namespace kitsfuse

#endif  // KITSFUSE_PHANTOM_HPP_

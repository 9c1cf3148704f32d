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

#include "kitsfuse/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "kv_text.hpp"

namespace kitsfuse {

IntensityStats::IntensityStats(double clip_low, double clip_high, double mean,
                               double std)
    : clip_low_(clip_low), clip_high_(clip_high), mean_(mean), std_(std) {
  if (!(std::isfinite(clip_low) && std::isfinite(clip_high) &&
        std::isfinite(mean) && std::isfinite(std))) {
    throw Error(ErrorCode::kDegenerateStats, "intensity stats must be finite");
  }
  if (!(clip_low < clip_high)) {
    throw Error(ErrorCode::kDegenerateStats,
                "clip range is empty: [" + std::to_string(clip_low) + ", " +
                    std::to_string(clip_high) + "]");
  }
  if (!(std > 0.0)) {
    throw Error(ErrorCode::kDegenerateStats,
                "standard deviation must be > 0, got " + std::to_string(std));
  }
}

double IntensityStats::normalize(double v) const noexcept {
  return (std::clamp(v, clip_low_, clip_high_) - mean_) / std_;
}

std::string IntensityStats::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "clip_low = " << clip_low_ << "\n"
     << "clip_high = " << clip_high_ << "\n"
     << "mean = " << mean_ << "\n"
     << "std = " << std_ << "\n";
  return os.str();
}

IntensityStats IntensityStats::from_text(std::string_view text) {
  std::array<double, 4> v{};
  std::array<bool, 4> seen{};
  constexpr std::array<std::string_view, 4> keys = {"clip_low", "clip_high",
                                                    "mean", "std"};
  for (const auto& kv : detail::parse_kv(text, ErrorCode::kConfig)) {
    const auto it = std::find(keys.begin(), keys.end(), kv.key);
    if (it == keys.end()) {
      throw Error(ErrorCode::kConfig, "unknown stats key '" + kv.key + "'");
    }
    const auto i = static_cast<std::size_t>(it - keys.begin());
    v[i] = detail::parse_double(kv.value, kv.key, ErrorCode::kConfig);
    seen[i] = true;
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kMissingKey,
                  "stats file is missing key '" + std::string(keys[i]) + "'");
    }
  }
  return {v[0], v[1], v[2], v[3]};
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw Error(ErrorCode::kEmptyInput, "percentile of an empty sample");
  }
  if (!(p >= 0.0 && p <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument, "percentile must be in [0, 100]");
  }
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IntensityStats compute_foreground_stats(
    std::span<const std::pair<ImageVolume, LabelVolume>> cases) {
  std::vector<double> values;
  for (const auto& [image, labels] : cases) {
    require_same_geometry(image.geometry(), labels.geometry(),
                          "foreground stats");
    const auto img = image.data();
    const auto lab = labels.data();
    for (std::size_t i = 0; i < lab.size(); ++i) {
      if (lab[i] != kBackground) values.push_back(img[i]);
    }
  }
  if (values.empty()) {
    throw Error(ErrorCode::kNoForeground,
                "no foreground voxels across " + std::to_string(cases.size()) +
                    " case(s)");
  }
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double std = std::sqrt(sq / n);
  return {percentile_sorted(values, 0.5), percentile_sorted(values, 99.5), mean,
          std};
}

ImageVolume clip_and_normalize(const ImageVolume& volume,
                               const IntensityStats& stats) {
  const auto in = volume.data();
  std::vector<float> out(in.size());
  std::transform(in.begin(), in.end(), out.begin(), [&stats](float v) {
    return static_cast<float>(stats.normalize(v));
  });
  return ImageVolume(volume.geometry(), std::move(out));
}

void PatchSpec::validate() const {
  for (auto n : size) {
    if (n < 1) {
      throw Error(ErrorCode::kInvalidArgument, "patch size entries must be >= 1");
    }
  }
  if (!(oversample_fraction >= 0.0 && oversample_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "oversample fraction must be in [0, 1]");
  }
}

Patch extract_patch(const ImageVolume& volume, const LabelVolume& labels,
                    const Index3& origin, const Shape3& size) {
  const Geometry& src = volume.geometry();
  const Geometry geometry(size, src.spacing());
  std::vector<float> img(geometry.voxel_count(), 0.0F);
  std::vector<std::uint8_t> lab(geometry.voxel_count(), kBackground);
  const auto sv = volume.data();
  const auto sl = labels.data();
  for (std::int64_t z = 0; z < size[2]; ++z) {
    const std::int64_t sz = origin[2] + z;
    if (sz < 0 || sz >= src.nz()) continue;
    for (std::int64_t y = 0; y < size[1]; ++y) {
      const std::int64_t sy = origin[1] + y;
      if (sy < 0 || sy >= src.ny()) continue;
      const std::int64_t x0 = std::max<std::int64_t>(0, -origin[0]);
      const std::int64_t x1 = std::min(size[0], src.nx() - origin[0]);
      for (std::int64_t x = x0; x < x1; ++x) {
        const std::size_t d = geometry.linear_index(x, y, z);
        const std::size_t s = src.linear_index(origin[0] + x, sy, sz);
        img[d] = sv[s];
        lab[d] = sl[s];
      }
    }
  }
  return Patch{ImageVolume(geometry, std::move(img)),
               LabelVolume(geometry, std::move(lab)), origin, false, 0};
}

PatchBatch sample_patches(const ImageVolume& volume, const LabelVolume& labels,
                          const PatchSpec& spec, std::size_t count,
                          std::uint64_t seed) {
  require_same_geometry(volume.geometry(), labels.geometry(), "sample_patches");
  spec.validate();
  const Geometry& g = volume.geometry();
  std::mt19937_64 rng(seed);

  std::array<std::vector<std::size_t>, 4> by_class;
  const auto lab = labels.data();
  for (std::size_t i = 0; i < lab.size(); ++i) {
    if (lab[i] != kBackground) by_class[lab[i]].push_back(i);
  }
  std::vector<std::uint8_t> present;
  for (std::uint8_t c = 1; c <= kMaxClassCode; ++c) {
    if (!by_class[c].empty()) present.push_back(c);
  }

  PatchBatch batch;
  batch.foreground_available = !present.empty();
  // Guard against 3 * (1/3) landing a hair above an integer.
  const double wanted = static_cast<double>(count) * spec.oversample_fraction;
  const auto forced = batch.foreground_available
                          ? std::min(count, static_cast<std::size_t>(
                                                std::ceil(wanted - 1e-9)))
                          : std::size_t{0};
  batch.patches.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Index3 origin{};
    std::uint8_t cls = 0;
    if (k < forced) {
      std::uniform_int_distribution<std::size_t> pick_class(0, present.size() - 1);
      cls = present[pick_class(rng)];
      const auto& voxels = by_class[cls];
      std::uniform_int_distribution<std::size_t> pick_voxel(0, voxels.size() - 1);
      const Index3 v = g.coordinates(voxels[pick_voxel(rng)]);
      for (int a = 0; a < 3; ++a) {
        std::uniform_int_distribution<std::int64_t> offset(0, spec.size[a] - 1);
        origin[a] = v[a] - offset(rng);
      }
    } else {
      for (int a = 0; a < 3; ++a) {
        const std::int64_t slack = g.shape()[a] - spec.size[a];
        std::uniform_int_distribution<std::int64_t> pos(std::min<std::int64_t>(0, slack),
                                                        std::max<std::int64_t>(0, slack));
        origin[a] = pos(rng);
      }
    }
    Patch p = extract_patch(volume, labels, origin, spec.size);
    p.foreground_forced = k < forced;
    p.forced_class = cls;
    batch.patches.push_back(std::move(p));
  }
  batch.forced_count = forced;
  return batch;
}

namespace {

template <typename T>
std::vector<T> mirror(std::span<const T> in, const Geometry& g, int axis) {
  std::vector<T> out(in.size());
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x) {
        Index3 s{x, y, z};
        s[axis] = g.shape()[axis] - 1 - s[axis];
        out[g.linear_index(x, y, z)] = in[g.linear_index(s)];
      }
    }
  }
  return out;
}

template <typename T>
std::vector<T> rotate_xy(std::span<const T> in, const Geometry& g,
                         const Geometry& rotated) {
  std::vector<T> out(in.size());
  for (std::int64_t z = 0; z < g.nz(); ++z) {
    for (std::int64_t y = 0; y < g.ny(); ++y) {
      for (std::int64_t x = 0; x < g.nx(); ++x) {
        out[rotated.linear_index(g.ny() - 1 - y, x, z)] = in[g.linear_index(x, y, z)];
      }
    }
  }
  return out;
}

}  // namespace

std::pair<ImageVolume, LabelVolume> augment_patch(const ImageVolume& image,
                                                  const LabelVolume& labels,
                                                  const AugmentOps& ops) {
  require_same_geometry(image.geometry(), labels.geometry(), "augment_patch");
  Geometry g = image.geometry();
  std::vector<float> img(image.data().begin(), image.data().end());
  std::vector<std::uint8_t> lab(labels.data().begin(), labels.data().end());
  const std::array<bool, 3> flips = {ops.mirror_x, ops.mirror_y, ops.mirror_z};
  for (int axis = 0; axis < 3; ++axis) {
    if (!flips[axis]) continue;
    img = mirror<float>(img, g, axis);
    lab = mirror<std::uint8_t>(lab, g, axis);
  }
  if (ops.rot90_xy) {
    const Geometry rotated({g.ny(), g.nx(), g.nz()},
                           {g.spacing()[1], g.spacing()[0], g.spacing()[2]});
    img = rotate_xy<float>(img, g, rotated);
    lab = rotate_xy<std::uint8_t>(lab, g, rotated);
    g = rotated;
  }
  return {ImageVolume(g, std::move(img)), LabelVolume(g, std::move(lab))};
}

AugmentOps random_augment_ops(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  AugmentOps ops;
  ops.mirror_x = coin(rng);
  ops.mirror_y = coin(rng);
  ops.mirror_z = coin(rng);
  ops.rot90_xy = coin(rng);
  return ops;
}

}  // namespace kitsfuse

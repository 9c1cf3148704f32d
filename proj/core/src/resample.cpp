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

#include "kitsfuse/resample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace kitsfuse {
namespace {

// Source coordinate (in voxel index units) sampled by each target index
// along one axis, following the center-alignment rule.
std::vector<double> source_positions(std::int64_t target_n, double target_s,
                                     double source_s) {
  std::vector<double> pos(static_cast<std::size_t>(target_n));
  const double ratio = target_s / source_s;
  for (std::int64_t j = 0; j < target_n; ++j) {
    pos[static_cast<std::size_t>(j)] =
        (static_cast<double>(j) + 0.5) * ratio - 0.5;
  }
  return pos;
}

struct LinearTap {
  std::int64_t i0;
  std::int64_t i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<LinearTap> linear_taps(std::int64_t target_n, double target_s,
                                   std::int64_t source_n, double source_s) {
  const auto pos = source_positions(target_n, target_s, source_s);
  std::vector<LinearTap> taps(pos.size());
  const double hi = static_cast<double>(source_n - 1);
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const double p = std::clamp(pos[j], 0.0, hi);
    const auto i0 = static_cast<std::int64_t>(std::floor(p));
    const std::int64_t i1 = std::min(i0 + 1, source_n - 1);
    taps[j] = {i0, i1, p - static_cast<double>(i0)};
  }
  return taps;
}

std::vector<std::int64_t> nearest_taps(std::int64_t target_n, double target_s,
                                       std::int64_t source_n, double source_s) {
  std::vector<std::int64_t> taps(static_cast<std::size_t>(target_n));
  const double ratio = target_s / source_s;
  for (std::int64_t j = 0; j < target_n; ++j) {
    // Index of the source voxel whose extent holds the target center.
    const auto i = static_cast<std::int64_t>(
        std::floor((static_cast<double>(j) + 0.5) * ratio));
    taps[static_cast<std::size_t>(j)] = std::clamp<std::int64_t>(i, 0, source_n - 1);
  }
  return taps;
}

std::int64_t round_half_up(double v) {
  return static_cast<std::int64_t>(std::floor(v + 0.5));
}

}  // namespace

TargetSpec TargetSpec::with_spacing(const Spacing3& spacing) {
  for (double s : spacing) {
    if (!std::isfinite(s) || s <= 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target spacing entries must be finite and > 0");
    }
  }
  return TargetSpec(spacing);
}

TargetSpec TargetSpec::with_geometry(const Geometry& geometry) {
  return TargetSpec(geometry);
}

TargetSpec TargetSpec::parse(std::string_view text) {
  if (text == "lowres") return lowres();
  if (text == "fullres") return fullres();
  Spacing3 s{};
  std::size_t pos = 0;
  for (int a = 0; a < 3; ++a) {
    const auto end = a < 2 ? text.find(',', pos) : text.size();
    if (end == std::string_view::npos) break;
    const auto part = text.substr(pos, end - pos);
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), s[a]);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad spacing '" + std::string(text) +
                      "', expected lowres, fullres or x,y,z");
    }
    pos = end + 1;
    if (a == 2) return with_spacing(s);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "bad spacing '" + std::string(text) +
                  "', expected lowres, fullres or x,y,z");
}

Shape3 resampled_shape(const Geometry& input, const Spacing3& target_spacing) {
  Shape3 shape{};
  for (int a = 0; a < 3; ++a) {
    const double extent =
        static_cast<double>(input.shape()[a]) * input.spacing()[a];
    shape[a] = std::max<std::int64_t>(1, round_half_up(extent / target_spacing[a]));
  }
  return shape;
}

Geometry TargetSpec::resolve(const Geometry& input) const {
  if (const auto* g = std::get_if<Geometry>(&target_)) return *g;
  const auto& spacing = std::get<Spacing3>(target_);
  return Geometry(resampled_shape(input, spacing), spacing);
}

ImageVolume resample_image(const ImageVolume& volume, const TargetSpec& spec) {
  const Geometry& in = volume.geometry();
  const Geometry out = spec.resolve(in);
  if (out == in) return volume;
  std::array<std::vector<LinearTap>, 3> taps;
  for (int a = 0; a < 3; ++a) {
    taps[a] = linear_taps(out.shape()[a], out.spacing()[a], in.shape()[a],
                          in.spacing()[a]);
  }
  const auto src = volume.data();
  std::vector<float> data(out.voxel_count());
  std::size_t k = 0;
  for (std::int64_t z = 0; z < out.nz(); ++z) {
    const auto& tz = taps[2][static_cast<std::size_t>(z)];
    for (std::int64_t y = 0; y < out.ny(); ++y) {
      const auto& ty = taps[1][static_cast<std::size_t>(y)];
      const std::size_t r00 = in.linear_index(0, ty.i0, tz.i0);
      const std::size_t r10 = in.linear_index(0, ty.i1, tz.i0);
      const std::size_t r01 = in.linear_index(0, ty.i0, tz.i1);
      const std::size_t r11 = in.linear_index(0, ty.i1, tz.i1);
      for (std::int64_t x = 0; x < out.nx(); ++x, ++k) {
        const auto& tx = taps[0][static_cast<std::size_t>(x)];
        auto lerp_x = [&](std::size_t row) {
          const double a = src[row + static_cast<std::size_t>(tx.i0)];
          const double b = src[row + static_cast<std::size_t>(tx.i1)];
          return a + (b - a) * tx.w1;
        };
        const double c0 = lerp_x(r00) + (lerp_x(r10) - lerp_x(r00)) * ty.w1;
        const double c1 = lerp_x(r01) + (lerp_x(r11) - lerp_x(r01)) * ty.w1;
        data[k] = static_cast<float>(c0 + (c1 - c0) * tz.w1);
      }
    }
  }
  return ImageVolume(out, std::move(data));
}

LabelVolume resample_labels(const LabelVolume& labels, const TargetSpec& spec) {
  const Geometry& in = labels.geometry();
  const Geometry out = spec.resolve(in);
  if (out == in) return labels;
  std::array<std::vector<std::int64_t>, 3> taps;
  for (int a = 0; a < 3; ++a) {
    taps[a] = nearest_taps(out.shape()[a], out.spacing()[a], in.shape()[a],
                           in.spacing()[a]);
  }
  const auto src = labels.data();
  std::vector<std::uint8_t> data(out.voxel_count());
  std::size_t k = 0;
  for (std::int64_t z = 0; z < out.nz(); ++z) {
    for (std::int64_t y = 0; y < out.ny(); ++y) {
      const std::size_t row = in.linear_index(0, taps[1][static_cast<std::size_t>(y)],
                                              taps[2][static_cast<std::size_t>(z)]);
      for (std::int64_t x = 0; x < out.nx(); ++x, ++k) {
        data[k] = src[row + static_cast<std::size_t>(taps[0][static_cast<std::size_t>(x)])];
      }
    }
  }
  return LabelVolume(out, std::move(data));
}

}  // namespace kitsfuse

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

#include "kitsfuse/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kitsfuse {

Geometry::Geometry(Shape3 shape, Spacing3 spacing)
    : shape_(shape), spacing_(spacing) {
  for (int a = 0; a < 3; ++a) {
    if (shape_[a] < 1) {
      throw Error(ErrorCode::kInvalidGeometry,
                  "shape entries must be >= 1, got " + to_string(*this));
    }
    if (!std::isfinite(spacing_[a]) || spacing_[a] <= 0.0) {
      throw Error(ErrorCode::kInvalidGeometry,
                  "spacing entries must be finite and > 0, got " +
                      to_string(*this));
    }
  }
}

Index3 Geometry::coordinates(std::size_t linear) const noexcept {
  const auto i = static_cast<std::int64_t>(linear);
  const std::int64_t x = i % shape_[0];
  const std::int64_t rest = i / shape_[0];
  return {x, rest % shape_[1], rest / shape_[1]};
}

std::array<double, 3> Geometry::voxel_center_mm(const Index3& p) const noexcept {
  return {(static_cast<double>(p[0]) + 0.5) * spacing_[0],
          (static_cast<double>(p[1]) + 0.5) * spacing_[1],
          (static_cast<double>(p[2]) + 0.5) * spacing_[2]};
}

std::string to_string(const Geometry& g) {
  std::ostringstream os;
  os << g.shape()[0] << "x" << g.shape()[1] << "x" << g.shape()[2] << " @ "
     << g.spacing()[0] << "x" << g.spacing()[1] << "x" << g.spacing()[2]
     << " mm";
  return os.str();
}

void require_same_geometry(const Geometry& a, const Geometry& b,
                           std::string_view what) {
  if (a != b) {
    throw Error(ErrorCode::kGeometryMismatch,
                std::string(what) + ": geometry " + to_string(a) +
                    " does not match " + to_string(b));
  }
}

ImageVolume::ImageVolume(Geometry geometry, std::vector<float> data)
    : Grid(std::move(geometry), std::move(data)) {
  const auto bad = std::find_if(data_.begin(), data_.end(),
                                [](float v) { return !std::isfinite(v); });
  if (bad != data_.end()) {
    throw Error(ErrorCode::kNonFiniteValue,
                "image voxel " + std::to_string(bad - data_.begin()) +
                    " is not finite");
  }
}

ImageVolume ImageVolume::filled(const Geometry& geometry, float value) {
  return ImageVolume(geometry, std::vector<float>(geometry.voxel_count(), value));
}

LabelVolume::LabelVolume(Geometry geometry, std::vector<std::uint8_t> data)
    : Grid(std::move(geometry), std::move(data)) {
  const auto bad = std::find_if(data_.begin(), data_.end(),
                                [](std::uint8_t v) { return v > kMaxClassCode; });
  if (bad != data_.end()) {
    throw Error(ErrorCode::kInvalidLabel,
                "label voxel " + std::to_string(bad - data_.begin()) +
                    " has class code " + std::to_string(*bad) +
                    ", expected 0..3");
  }
}

LabelVolume LabelVolume::background(const Geometry& geometry) {
  return LabelVolume(geometry,
                     std::vector<std::uint8_t>(geometry.voxel_count(), 0));
}

std::array<std::size_t, 4> LabelVolume::histogram() const noexcept {
  std::array<std::size_t, 4> h{};
  for (auto v : data_) ++h[v];
  return h;
}

BinaryMask::BinaryMask(Geometry geometry, std::vector<std::uint8_t> data)
    : Grid(std::move(geometry), std::move(data)) {
  for (auto& v : data_) v = v != 0 ? 1 : 0;
}

BinaryMask BinaryMask::empty(const Geometry& geometry) {
  return BinaryMask(geometry,
                    std::vector<std::uint8_t>(geometry.voxel_count(), 0));
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

std::string_view region_name(Region region) {
  switch (region) {
    case Region::kKidneyAndMasses: return "kidney_and_masses";
    case Region::kMasses: return "masses";
    case Region::kTumor: return "tumor";
  }
  return "unknown";
}

BinaryMask region_mask(const LabelVolume& labels, Region region) {
  std::vector<std::uint8_t> out(labels.size());
  const auto in = labels.data();
  std::transform(in.begin(), in.end(), out.begin(), [region](std::uint8_t c) {
    return static_cast<std::uint8_t>(region_contains(region, c));
  });
  return BinaryMask(labels.geometry(), std::move(out));
}

BinaryMask foreground_mask(const LabelVolume& labels) {
  std::vector<std::uint8_t> out(labels.size());
  const auto in = labels.data();
  std::transform(in.begin(), in.end(), out.begin(),
                 [](std::uint8_t c) { return static_cast<std::uint8_t>(c != 0); });
  return BinaryMask(labels.geometry(), std::move(out));
}

double voxel_count_to_mm3(std::size_t count, const Geometry& geometry) {
  return static_cast<double>(count) * geometry.spacing()[0] *
         geometry.spacing()[1] * geometry.spacing()[2];
}

}  // namespace kitsfuse

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

// Volume geometry, dense voxel grids and the hierarchical region vocabulary.
//
// Memory order is x-fastest: the voxel (x, y, z) lives at linear index
// x + nx * (y + ny * z). Every grid type is an immutable value; operations
// build a new grid instead of mutating their input.
//
// Class codes follow the KiTS convention:
//   0 background, 1 kidney, 2 tumor, 3 cyst.

#ifndef KITSFUSE_TYPES_HPP_
#define KITSFUSE_TYPES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kitsfuse/error.hpp"

namespace kitsfuse {

using Index3 = std::array<std::int64_t, 3>;
using Shape3 = std::array<std::int64_t, 3>;
using Spacing3 = std::array<double, 3>;

/// Shape (voxels per axis, x/y/z) and spacing (mm per voxel, x/y/z).
class Geometry {
 public:
  /// Throws Error(kInvalidGeometry) unless every extent is >= 1 and every
  /// spacing is finite and > 0.
  Geometry(Shape3 shape, Spacing3 spacing);

  const Shape3& shape() const noexcept { return shape_; }
  const Spacing3& spacing() const noexcept { return spacing_; }
  std::int64_t nx() const noexcept { return shape_[0]; }
  std::int64_t ny() const noexcept { return shape_[1]; }
  std::int64_t nz() const noexcept { return shape_[2]; }

  std::size_t voxel_count() const noexcept {
    return static_cast<std::size_t>(shape_[0] * shape_[1] * shape_[2]);
  }
  double voxel_volume_mm3() const noexcept {
    return spacing_[0] * spacing_[1] * spacing_[2];
  }

  std::size_t linear_index(std::int64_t x, std::int64_t y,
                           std::int64_t z) const noexcept {
    return static_cast<std::size_t>(x + shape_[0] * (y + shape_[1] * z));
  }
  std::size_t linear_index(const Index3& p) const noexcept {
    return linear_index(p[0], p[1], p[2]);
  }
  Index3 coordinates(std::size_t linear) const noexcept;
  bool contains(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return x >= 0 && y >= 0 && z >= 0 && x < shape_[0] && y < shape_[1] &&
           z < shape_[2];
  }

  /// Physical position of a voxel center in mm, (i + 0.5) * spacing.
  std::array<double, 3> voxel_center_mm(const Index3& p) const noexcept;

  friend bool operator==(const Geometry&, const Geometry&) = default;

 private:
  Shape3 shape_;
  Spacing3 spacing_;
};

std::string to_string(const Geometry& g);

/// Throws Error(kGeometryMismatch) naming `what` when a and b differ.
void require_same_geometry(const Geometry& a, const Geometry& b,
                           std::string_view what);

/// Dense grid of voxels with an attached geometry. Read-only after
/// construction.
template <typename T>
class Grid {
 public:
  using value_type = T;

  const Geometry& geometry() const noexcept { return geometry_; }
  std::span<const T> data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  T operator[](std::size_t i) const noexcept { return data_[i]; }
  T at(std::int64_t x, std::int64_t y, std::int64_t z) const noexcept {
    return data_[geometry_.linear_index(x, y, z)];
  }

  /// Moves the payload out, leaving this grid empty. Used to build a
  /// modified copy without an extra allocation.
  std::vector<T> release() && { return std::move(data_); }

  friend bool operator==(const Grid&, const Grid&) = default;

 protected:
  Grid(Geometry geometry, std::vector<T> data)
      : geometry_(std::move(geometry)), data_(std::move(data)) {
    if (data_.size() != geometry_.voxel_count()) {
      throw Error(ErrorCode::kSizeMismatch,
                  "voxel payload has " + std::to_string(data_.size()) +
                      " elements, geometry " + to_string(geometry_) +
                      " needs " + std::to_string(geometry_.voxel_count()));
    }
  }

  Geometry geometry_;
  std::vector<T> data_;
};

/// Scalar intensity volume (HU before normalization). All values finite.
class ImageVolume : public Grid<float> {
 public:
  ImageVolume(Geometry geometry, std::vector<float> data);
  /// Constant-valued volume.
  static ImageVolume filled(const Geometry& geometry, float value);
};

enum class ClassCode : std::uint8_t {
  kBackground = 0,
  kKidney = 1,
  kTumor = 2,
  kCyst = 3,
};

inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kKidney = 1;
inline constexpr std::uint8_t kTumor = 2;
inline constexpr std::uint8_t kCyst = 3;
inline constexpr std::uint8_t kMaxClassCode = 3;

/// Hardened segmentation: every voxel holds a class code in {0,1,2,3}.
class LabelVolume : public Grid<std::uint8_t> {
 public:
  LabelVolume(Geometry geometry, std::vector<std::uint8_t> data);
  static LabelVolume background(const Geometry& geometry);
  /// Voxels per class code, indexed 0..3.
  std::array<std::size_t, 4> histogram() const noexcept;
};

/// Boolean voxel mask stored one byte per voxel (0 or 1).
class BinaryMask : public Grid<std::uint8_t> {
 public:
  BinaryMask(Geometry geometry, std::vector<std::uint8_t> data);
  static BinaryMask empty(const Geometry& geometry);
  bool test(std::size_t i) const noexcept { return data_[i] != 0; }
  std::size_t count() const noexcept;
};

/// Nested evaluation targets: Tumor ⊂ Masses ⊂ KidneyAndMasses.
enum class Region {
  kKidneyAndMasses,
  kMasses,
  kTumor,
};

inline constexpr std::array<Region, 3> kAllRegions = {
    Region::kKidneyAndMasses, Region::kMasses, Region::kTumor};

std::string_view region_name(Region region);

/// True iff `code` belongs to the class-code set of `region`
/// (KidneyAndMasses {1,2,3}, Masses {2,3}, Tumor {2}).
constexpr bool region_contains(Region region, std::uint8_t code) noexcept {
  switch (region) {
    case Region::kKidneyAndMasses: return code >= 1 && code <= 3;
    case Region::kMasses: return code == kTumor || code == kCyst;
    case Region::kTumor: return code == kTumor;
  }
  return false;
}

BinaryMask region_mask(const LabelVolume& labels, Region region);

/// Mask of voxels with any nonzero class.
BinaryMask foreground_mask(const LabelVolume& labels);

double voxel_count_to_mm3(std::size_t count, const Geometry& geometry);

}  // namespace kitsfuse

#endif  // KITSFUSE_TYPES_HPP_

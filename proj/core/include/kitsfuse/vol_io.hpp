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

// Volume file formats.
//
// NIfTI-1 (.nii / .nii.gz), little-endian, single-file only. Fields read:
//   sizeof_hdr  @0    int32, must be 348
//   dim[8]      @40   int16, dim[0] must be 3
//   datatype    @70   int16, 2 (uint8), 4 (int16) or 16 (float32)
//   pixdim[8]   @76   float32, pixdim[1..3] is the spacing in mm
//   vox_offset  @108  float32
//   scl_slope   @112  float32, scaling applied when non-zero
//   scl_inter   @116  float32
//   magic       @344  "n+1\0" or "ni1\0"
// Orientation fields are ignored. Labels are written as uint8, images as
// float32; both with vox_offset 352 and unit scaling.
//
// Raw: a little-endian voxel payload plus a UTF-8 sidecar of `key = value`
// lines with keys shape, spacing_mm, dtype (uint8|int16|float32) and kind
// (image|label). Blank lines and lines starting with '#' are skipped.
//
// Label files carry KiTS class codes (0 background, 1 kidney, 2 tumor,
// 3 cyst). A LabelCodeMap translates other code assignments on read.
//
// Writers go through a temporary file in the destination directory and
// rename it into place, so a reader never sees a partial file.

#ifndef KITSFUSE_VOL_IO_HPP_
#define KITSFUSE_VOL_IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kitsfuse/types.hpp"

namespace kitsfuse {

enum class VoxelType { kUint8, kInt16, kFloat32 };
enum class VolumeKind { kImage, kLabel };

std::string_view voxel_type_name(VoxelType t);
std::string_view volume_kind_name(VolumeKind k);

struct VolumeHeaderInfo {
  Shape3 shape{};
  Spacing3 spacing{};
  VoxelType datatype = VoxelType::kUint8;
  float scl_slope = 0.0F;
  float scl_inter = 0.0F;
  std::int64_t vox_offset = 352;

  bool scaling_applies() const noexcept { return scl_slope != 0.0F; }
};

using AnyVolume = std::variant<ImageVolume, LabelVolume>;

/// Maps stored class codes onto the KiTS codes. Unmapped stored codes are
/// passed through unchanged and then validated.
class LabelCodeMap {
 public:
  LabelCodeMap();
  /// Parses "src:dst,src:dst,..." (e.g. "2:3,3:2"). dst must be 0..3.
  static LabelCodeMap parse(std::string_view text);

  void set(int stored, std::uint8_t code);
  /// Mapped code, or nullopt when `stored` is outside 0..255.
  std::optional<int> map(int stored) const;
  bool is_identity() const noexcept;

 private:
  std::array<int, 256> table_{};
};

// NIfTI ---------------------------------------------------------------------

/// Decodes only the header. Throws kMalformedHeader, kBigEndian or
/// kUnsupportedDatatype.
VolumeHeaderInfo parse_nifti_header(std::span<const std::uint8_t> bytes);

ImageVolume decode_nifti_image(std::span<const std::uint8_t> bytes);
LabelVolume decode_nifti_labels(std::span<const std::uint8_t> bytes,
                                const LabelCodeMap& codes = LabelCodeMap());

std::vector<std::uint8_t> encode_nifti(const ImageVolume& volume);
std::vector<std::uint8_t> encode_nifti(const LabelVolume& volume);

/// Reads a .nii or .nii.gz file (gzip detected from the magic bytes).
ImageVolume read_nifti_image(const std::filesystem::path& path);
LabelVolume read_nifti_labels(const std::filesystem::path& path,
                              const LabelCodeMap& codes = LabelCodeMap());
/// Header datatype decides: uint8 payloads become labels when every value is
/// a valid class code, everything else an image.
AnyVolume read_nifti(const std::filesystem::path& path);

/// Gzip-compresses when the path ends in ".gz".
void write_nifti(const ImageVolume& volume, const std::filesystem::path& path);
void write_nifti(const LabelVolume& volume, const std::filesystem::path& path);

// Raw + sidecar --------------------------------------------------------------

struct RawSidecar {
  Shape3 shape{};
  Spacing3 spacing{};
  VoxelType dtype = VoxelType::kUint8;
  VolumeKind kind = VolumeKind::kLabel;
};

RawSidecar parse_raw_sidecar(std::string_view text);
std::string format_raw_sidecar(const RawSidecar& sidecar);

AnyVolume read_raw(const std::filesystem::path& data_path,
                   const std::filesystem::path& meta_path,
                   const LabelCodeMap& codes = LabelCodeMap());
void write_raw(const ImageVolume& volume, const std::filesystem::path& data_path,
               const std::filesystem::path& meta_path);
void write_raw(const LabelVolume& volume, const std::filesystem::path& data_path,
               const std::filesystem::path& meta_path);

// Format dispatch by extension: ".nii"/".nii.gz" or ".raw" (sidecar at
// "<path>.meta"). Used by the CLI.

ImageVolume read_image(const std::filesystem::path& path);
LabelVolume read_labels(const std::filesystem::path& path,
                        const LabelCodeMap& codes = LabelCodeMap());
void write_volume(const ImageVolume& volume, const std::filesystem::path& path);
void write_volume(const LabelVolume& volume, const std::filesystem::path& path);

/// Whole-file read, transparently gunzipping gzip streams.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
/// Atomic write (temp file + rename), gzip-compressing when `gzip` is set.
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes, bool gzip = false);

}  // namespace kitsfuse

#endif  // KITSFUSE_VOL_IO_HPP_

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

#include "kitsfuse/vol_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <unistd.h>

static_assert(std::endian::native == std::endian::little,
              "vol_io assumes a little-endian host");

namespace kitsfuse {
namespace {

constexpr std::int32_t kNiftiHeaderSize = 348;
constexpr std::int64_t kNiftiVoxOffset = 352;
constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;

std::int32_t byteswap32(std::int32_t v) {
  const auto u = static_cast<std::uint32_t>(v);
  return static_cast<std::int32_t>((u >> 24) | ((u >> 8) & 0xff00U) |
                                   ((u << 8) & 0xff0000U) | (u << 24));
}

template <typename T>
T load(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

template <typename T>
void store(std::vector<std::uint8_t>& bytes, std::size_t offset, T v) {
  std::memcpy(bytes.data() + offset, &v, sizeof(T));
}

std::size_t voxel_size(VoxelType t) {
  switch (t) {
    case VoxelType::kUint8: return 1;
    case VoxelType::kInt16: return 2;
    case VoxelType::kFloat32: return 4;
  }
  return 1;
}

// Decodes a payload to doubles, applying slope/intercept scaling.
std::vector<double> decode_values(std::span<const std::uint8_t> payload,
                                  VoxelType type, std::size_t count,
                                  float slope, float inter) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    switch (type) {
      case VoxelType::kUint8: out[i] = payload[i]; break;
      case VoxelType::kInt16:
        out[i] = load<std::int16_t>(payload, 2 * i);
        break;
      case VoxelType::kFloat32: out[i] = load<float>(payload, 4 * i); break;
    }
  }
  if (slope != 0.0F) {
    const double s = slope;
    const double b = inter;
    for (auto& v : out) v = v * s + b;
  }
  return out;
}

std::vector<float> to_image_data(const std::vector<double>& values) {
  std::vector<float> data(values.size());
  std::transform(values.begin(), values.end(), data.begin(),
                 [](double v) { return static_cast<float>(v); });
  return data;
}

std::vector<std::uint8_t> to_label_data(const std::vector<double>& values,
                                        const LabelCodeMap& codes) {
  std::vector<std::uint8_t> data(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    std::optional<int> mapped;
    if (std::isfinite(v) && v == std::floor(v) && v >= 0.0 && v <= 255.0) {
      mapped = codes.map(static_cast<int>(v));
    }
    if (!mapped || *mapped < 0 || *mapped > kMaxClassCode) {
      std::ostringstream os;
      os << "label voxel " << i << " holds value " << v
         << ", expected a class code in 0..3";
      throw Error(ErrorCode::kLabelOutOfRange, os.str());
    }
    data[i] = static_cast<std::uint8_t>(*mapped);
  }
  return data;
}

struct DecodedNifti {
  VolumeHeaderInfo header;
  std::vector<double> values;
};

DecodedNifti decode_nifti(std::span<const std::uint8_t> bytes) {
  DecodedNifti d;
  d.header = parse_nifti_header(bytes);
  const Geometry geometry(d.header.shape, d.header.spacing);
  const std::size_t count = geometry.voxel_count();
  const std::size_t need = count * voxel_size(d.header.datatype);
  const auto offset = static_cast<std::size_t>(d.header.vox_offset);
  if (bytes.size() < offset || bytes.size() - offset < need) {
    throw Error(ErrorCode::kTruncatedPayload,
                "nifti payload needs " + std::to_string(need) +
                    " bytes at offset " + std::to_string(offset) + ", file has " +
                    std::to_string(bytes.size()));
  }
  d.values = decode_values(bytes.subspan(offset, need), d.header.datatype, count,
                           d.header.scl_slope, d.header.scl_inter);
  return d;
}

std::vector<std::uint8_t> encode_nifti_common(const Geometry& g,
                                              std::int16_t datatype,
                                              std::int16_t bitpix,
                                              std::size_t payload_bytes) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(kNiftiVoxOffset) +
                                    payload_bytes,
                                0);
  store<std::int32_t>(out, 0, kNiftiHeaderSize);
  const std::int16_t dims[8] = {3,
                                static_cast<std::int16_t>(g.nx()),
                                static_cast<std::int16_t>(g.ny()),
                                static_cast<std::int16_t>(g.nz()),
                                1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) store<std::int16_t>(out, 40 + 2 * i, dims[i]);
  store<std::int16_t>(out, 70, datatype);
  store<std::int16_t>(out, 72, bitpix);
  const float pixdim[8] = {1.0F,
                           static_cast<float>(g.spacing()[0]),
                           static_cast<float>(g.spacing()[1]),
                           static_cast<float>(g.spacing()[2]),
                           0.0F, 0.0F, 0.0F, 0.0F};
  for (int i = 0; i < 8; ++i) store<float>(out, 76 + 4 * i, pixdim[i]);
  store<float>(out, 108, static_cast<float>(kNiftiVoxOffset));
  store<float>(out, 112, 1.0F);  // scl_slope
  store<float>(out, 116, 0.0F);  // scl_inter
  out[123] = 10;                 // xyzt_units: mm, seconds
  std::memcpy(out.data() + 344, "n+1\0", 4);
  return out;
}

void check_nifti_dims(const Geometry& g) {
  for (auto n : g.shape()) {
    if (n > std::numeric_limits<std::int16_t>::max()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "nifti-1 cannot store extents above 32767: " + to_string(g));
    }
  }
}

bool is_gzip(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> in,
                                 const std::filesystem::path& path) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) {
    throw Error(ErrorCode::kIo, "inflateInit2 failed");
  }
  std::vector<std::uint8_t> out;
  out.resize(std::max<std::size_t>(in.size() * 4, 1 << 16));
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  while (true) {
    if (zs.total_out == out.size()) out.resize(out.size() * 2);
    zs.next_out = out.data() + zs.total_out;
    zs.avail_out = static_cast<uInt>(std::min<std::size_t>(
        out.size() - zs.total_out, std::numeric_limits<uInt>::max()));
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc == Z_STREAM_END) {
      // Concatenated gzip members.
      if (zs.avail_in > 0) {
        inflateReset(&zs);
        continue;
      }
      break;
    }
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
    if (rc != Z_OK && rc != Z_BUF_ERROR) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kIo, "corrupt gzip stream in " + path.string());
    }
  }
  out.resize(zs.total_out);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) {
    throw Error(ErrorCode::kTruncatedPayload,
                "gzip stream ends early in " + path.string());
  }
  return out;
}

std::vector<std::uint8_t> gzip_bytes(std::span<const std::uint8_t> in) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::kIo, "deflateInit2 failed");
  }
  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(in.size())));
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::kIo, "gzip compression failed");
  return out;
}

bool has_suffix(const std::filesystem::path& path, std::string_view suffix) {
  const std::string s = path.string();
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_values(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == ',' || s[i] == 'x' ||
                            s[i] == '\t')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != ',' && s[i] != 'x' &&
           s[i] != '\t') {
      ++i;
    }
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view key) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kMalformedHeader,
                "sidecar key '" + std::string(key) + "' has bad value '" +
                    std::string(s) + "'");
  }
  return v;
}

template <typename T>
std::array<T, 3> parse_triplet(std::string_view s, std::string_view key) {
  const auto parts = split_values(s);
  if (parts.size() != 3) {
    throw Error(ErrorCode::kMalformedHeader,
                "sidecar key '" + std::string(key) + "' needs 3 values, got '" +
                    std::string(s) + "'");
  }
  return {parse_number<T>(parts[0], key), parse_number<T>(parts[1], key),
          parse_number<T>(parts[2], key)};
}

std::vector<std::uint8_t> read_plain_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  static std::atomic<unsigned> counter{0};
  const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
  std::ostringstream name;
  name << "." << path.filename().string() << ".tmp." << ::getpid() << "."
       << (tid % 100000) << "." << counter++;
  return path.parent_path() / name.str();
}

std::filesystem::path raw_meta_path(const std::filesystem::path& data_path) {
  return std::filesystem::path(data_path.string() + ".meta");
}

template <typename Volume>
std::vector<std::uint8_t> raw_payload(const Volume& v) {
  const auto data = v.data();
  std::vector<std::uint8_t> out(data.size_bytes());
  std::memcpy(out.data(), data.data(), out.size());
  return out;
}

}  // namespace

std::string_view voxel_type_name(VoxelType t) {
  switch (t) {
    case VoxelType::kUint8: return "uint8";
    case VoxelType::kInt16: return "int16";
    case VoxelType::kFloat32: return "float32";
  }
  return "unknown";
}

std::string_view volume_kind_name(VolumeKind k) {
  return k == VolumeKind::kImage ? "image" : "label";
}

LabelCodeMap::LabelCodeMap() {
  for (int i = 0; i < 256; ++i) table_[i] = i;
}

LabelCodeMap LabelCodeMap::parse(std::string_view text) {
  LabelCodeMap m;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto colon = item.find(':');
    int src = -1;
    int dst = -1;
    bool ok = colon != std::string_view::npos;
    if (ok) {
      const auto a = trim(item.substr(0, colon));
      const auto b = trim(item.substr(colon + 1));
      ok = std::from_chars(a.data(), a.data() + a.size(), src).ec == std::errc() &&
           std::from_chars(b.data(), b.data() + b.size(), dst).ec == std::errc();
    }
    if (!ok || src < 0 || src > 255 || dst < 0 || dst > kMaxClassCode) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad label map entry '" + std::string(item) +
                      "', expected src:dst with src 0..255 and dst 0..3");
    }
    m.set(src, static_cast<std::uint8_t>(dst));
    if (end == text.size()) break;
  }
  return m;
}

void LabelCodeMap::set(int stored, std::uint8_t code) { table_.at(stored) = code; }

std::optional<int> LabelCodeMap::map(int stored) const {
  if (stored < 0 || stored > 255) return std::nullopt;
  return table_[stored];
}

bool LabelCodeMap::is_identity() const noexcept {
  for (int i = 0; i < 256; ++i) {
    if (table_[i] != i) return false;
  }
  return true;
}

VolumeHeaderInfo parse_nifti_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < static_cast<std::size_t>(kNiftiHeaderSize)) {
    throw Error(ErrorCode::kMalformedHeader,
                "file is shorter than a 348-byte nifti-1 header");
  }
  const auto sizeof_hdr = load<std::int32_t>(bytes, 0);
  if (sizeof_hdr != kNiftiHeaderSize) {
    if (byteswap32(sizeof_hdr) == kNiftiHeaderSize) {
      throw Error(ErrorCode::kBigEndian,
                  "big-endian nifti files are not supported");
    }
    throw Error(ErrorCode::kMalformedHeader,
                "sizeof_hdr is " + std::to_string(sizeof_hdr) + ", expected 348");
  }
  if (std::memcmp(bytes.data() + 344, "n+1\0", 4) != 0 &&
      std::memcmp(bytes.data() + 344, "ni1\0", 4) != 0) {
    throw Error(ErrorCode::kMalformedHeader, "bad nifti-1 magic");
  }
  const auto ndim = load<std::int16_t>(bytes, 40);
  if (ndim != 3) {
    throw Error(ErrorCode::kMalformedHeader,
                "dim[0] is " + std::to_string(ndim) + ", expected 3");
  }
  VolumeHeaderInfo h;
  for (int a = 0; a < 3; ++a) {
    h.shape[a] = load<std::int16_t>(bytes, 42 + 2 * a);
    h.spacing[a] = load<float>(bytes, 80 + 4 * a);
    if (h.shape[a] < 1) {
      throw Error(ErrorCode::kMalformedHeader,
                  "dim[" + std::to_string(a + 1) + "] is " +
                      std::to_string(h.shape[a]));
    }
    if (!std::isfinite(h.spacing[a]) || h.spacing[a] <= 0.0) {
      throw Error(ErrorCode::kMalformedHeader,
                  "pixdim[" + std::to_string(a + 1) + "] is not a positive spacing");
    }
  }
  switch (load<std::int16_t>(bytes, 70)) {
    case kDtUint8: h.datatype = VoxelType::kUint8; break;
    case kDtInt16: h.datatype = VoxelType::kInt16; break;
    case kDtFloat32: h.datatype = VoxelType::kFloat32; break;
    default:
      throw Error(ErrorCode::kUnsupportedDatatype,
                  "nifti datatype " +
                      std::to_string(load<std::int16_t>(bytes, 70)) +
                      " is not one of 2 (uint8), 4 (int16), 16 (float32)");
  }
  const float vox_offset = load<float>(bytes, 108);
  if (!std::isfinite(vox_offset) || vox_offset < 0.0F) {
    throw Error(ErrorCode::kMalformedHeader, "bad vox_offset");
  }
  // Single-file nifti puts the payload after the header; a vox_offset of 0
  // in old writers means "right after the 348-byte header".
  h.vox_offset = std::max<std::int64_t>(static_cast<std::int64_t>(vox_offset),
                                        kNiftiHeaderSize);
  h.scl_slope = load<float>(bytes, 112);
  h.scl_inter = load<float>(bytes, 116);
  if (!std::isfinite(h.scl_slope) || !std::isfinite(h.scl_inter)) {
    h.scl_slope = 0.0F;
    h.scl_inter = 0.0F;
  }
  return h;
}

ImageVolume decode_nifti_image(std::span<const std::uint8_t> bytes) {
  auto d = decode_nifti(bytes);
  return ImageVolume(Geometry(d.header.shape, d.header.spacing),
                     to_image_data(d.values));
}

LabelVolume decode_nifti_labels(std::span<const std::uint8_t> bytes,
                                const LabelCodeMap& codes) {
  auto d = decode_nifti(bytes);
  return LabelVolume(Geometry(d.header.shape, d.header.spacing),
                     to_label_data(d.values, codes));
}

std::vector<std::uint8_t> encode_nifti(const ImageVolume& volume) {
  check_nifti_dims(volume.geometry());
  const auto data = volume.data();
  auto out = encode_nifti_common(volume.geometry(), kDtFloat32, 32,
                                 data.size_bytes());
  std::memcpy(out.data() + kNiftiVoxOffset, data.data(), data.size_bytes());
  return out;
}

std::vector<std::uint8_t> encode_nifti(const LabelVolume& volume) {
  check_nifti_dims(volume.geometry());
  const auto data = volume.data();
  auto out =
      encode_nifti_common(volume.geometry(), kDtUint8, 8, data.size_bytes());
  std::memcpy(out.data() + kNiftiVoxOffset, data.data(), data.size_bytes());
  return out;
}

ImageVolume read_nifti_image(const std::filesystem::path& path) {
  return decode_nifti_image(read_file_bytes(path));
}

LabelVolume read_nifti_labels(const std::filesystem::path& path,
                              const LabelCodeMap& codes) {
  return decode_nifti_labels(read_file_bytes(path), codes);
}

AnyVolume read_nifti(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const auto header = parse_nifti_header(bytes);
  if (header.datatype == VoxelType::kUint8) {
    try {
      return decode_nifti_labels(bytes);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kLabelOutOfRange) throw;
    }
  }
  return decode_nifti_image(bytes);
}

void write_nifti(const ImageVolume& volume, const std::filesystem::path& path) {
  write_file_bytes(path, encode_nifti(volume), has_suffix(path, ".gz"));
}

void write_nifti(const LabelVolume& volume, const std::filesystem::path& path) {
  write_file_bytes(path, encode_nifti(volume), has_suffix(path, ".gz"));
}

RawSidecar parse_raw_sidecar(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    auto sep = line.find('=');
    if (sep == std::string_view::npos) sep = line.find(':');
    if (sep == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedHeader,
                  "sidecar line '" + std::string(line) + "' is not key = value");
    }
    kv[std::string(trim(line.substr(0, sep)))] =
        std::string(trim(line.substr(sep + 1)));
  }
  auto need = [&](std::string_view key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw Error(ErrorCode::kMissingKey,
                  "sidecar is missing key '" + std::string(key) + "'");
    }
    return it->second;
  };
  RawSidecar s;
  s.shape = parse_triplet<std::int64_t>(need("shape"), "shape");
  s.spacing = parse_triplet<double>(need("spacing_mm"), "spacing_mm");
  const auto& dtype = need("dtype");
  if (dtype == "uint8") {
    s.dtype = VoxelType::kUint8;
  } else if (dtype == "int16") {
    s.dtype = VoxelType::kInt16;
  } else if (dtype == "float32") {
    s.dtype = VoxelType::kFloat32;
  } else {
    throw Error(ErrorCode::kUnsupportedDatatype,
                "sidecar dtype '" + dtype + "' is not uint8, int16 or float32");
  }
  const auto& kind = need("kind");
  if (kind == "image") {
    s.kind = VolumeKind::kImage;
  } else if (kind == "label") {
    s.kind = VolumeKind::kLabel;
  } else {
    throw Error(ErrorCode::kMalformedHeader,
                "sidecar kind '" + kind + "' is not image or label");
  }
  // Validates the geometry invariants.
  Geometry(s.shape, s.spacing);
  return s;
}

std::string format_raw_sidecar(const RawSidecar& s) {
  std::ostringstream os;
  os.precision(17);
  os << "kind = " << volume_kind_name(s.kind) << "\n"
     << "dtype = " << voxel_type_name(s.dtype) << "\n"
     << "shape = " << s.shape[0] << " " << s.shape[1] << " " << s.shape[2]
     << "\n"
     << "spacing_mm = " << s.spacing[0] << " " << s.spacing[1] << " "
     << s.spacing[2] << "\n";
  return os.str();
}

AnyVolume read_raw(const std::filesystem::path& data_path,
                   const std::filesystem::path& meta_path,
                   const LabelCodeMap& codes) {
  const auto meta_bytes = read_plain_file(meta_path);
  const auto sidecar = parse_raw_sidecar(std::string_view(
      reinterpret_cast<const char*>(meta_bytes.data()), meta_bytes.size()));
  const Geometry geometry(sidecar.shape, sidecar.spacing);
  const auto payload = read_plain_file(data_path);
  const std::size_t need = geometry.voxel_count() * voxel_size(sidecar.dtype);
  if (payload.size() != need) {
    throw Error(ErrorCode::kSizeMismatch,
                "raw payload " + data_path.string() + " has " +
                    std::to_string(payload.size()) + " bytes, shape needs " +
                    std::to_string(need));
  }
  const auto values = decode_values(payload, sidecar.dtype,
                                    geometry.voxel_count(), 0.0F, 0.0F);
  if (sidecar.kind == VolumeKind::kLabel) {
    return LabelVolume(geometry, to_label_data(values, codes));
  }
  return ImageVolume(geometry, to_image_data(values));
}

void write_raw(const ImageVolume& volume, const std::filesystem::path& data_path,
               const std::filesystem::path& meta_path) {
  const RawSidecar s{volume.geometry().shape(), volume.geometry().spacing(),
                     VoxelType::kFloat32, VolumeKind::kImage};
  write_file_bytes(data_path, raw_payload(volume));
  const auto text = format_raw_sidecar(s);
  write_file_bytes(meta_path, std::span(reinterpret_cast<const std::uint8_t*>(
                                            text.data()),
                                        text.size()));
}

void write_raw(const LabelVolume& volume, const std::filesystem::path& data_path,
               const std::filesystem::path& meta_path) {
  const RawSidecar s{volume.geometry().shape(), volume.geometry().spacing(),
                     VoxelType::kUint8, VolumeKind::kLabel};
  write_file_bytes(data_path, raw_payload(volume));
  const auto text = format_raw_sidecar(s);
  write_file_bytes(meta_path, std::span(reinterpret_cast<const std::uint8_t*>(
                                            text.data()),
                                        text.size()));
}

ImageVolume read_image(const std::filesystem::path& path) {
  if (has_suffix(path, ".raw")) {
    auto v = read_raw(path, raw_meta_path(path));
    if (auto* img = std::get_if<ImageVolume>(&v)) return std::move(*img);
    const auto& labels = std::get<LabelVolume>(v);
    std::vector<float> data(labels.data().begin(), labels.data().end());
    return ImageVolume(labels.geometry(), std::move(data));
  }
  return read_nifti_image(path);
}

LabelVolume read_labels(const std::filesystem::path& path,
                        const LabelCodeMap& codes) {
  if (has_suffix(path, ".raw")) {
    auto v = read_raw(path, raw_meta_path(path), codes);
    if (auto* labels = std::get_if<LabelVolume>(&v)) return std::move(*labels);
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + " is an image volume, expected labels");
  }
  return read_nifti_labels(path, codes);
}

void write_volume(const ImageVolume& volume, const std::filesystem::path& path) {
  if (has_suffix(path, ".raw")) {
    write_raw(volume, path, raw_meta_path(path));
  } else {
    write_nifti(volume, path);
  }
}

void write_volume(const LabelVolume& volume, const std::filesystem::path& path) {
  if (has_suffix(path, ".raw")) {
    write_raw(volume, path, raw_meta_path(path));
  } else {
    write_nifti(volume, path);
  }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  auto bytes = read_plain_file(path);
  if (is_gzip(bytes)) return gunzip(bytes, path);
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes, bool gzip) {
  std::vector<std::uint8_t> compressed;
  if (gzip) {
    compressed = gzip_bytes(bytes);
    bytes = compressed;
  }
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::kIo,
                "cannot rename into " + path.string() + ": " + ec.message());
  }
}

}  // namespace kitsfuse

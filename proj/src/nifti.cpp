// Copyright 2026 The voxeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "voxeval/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <type_traits>

namespace voxeval {

namespace {

// Header reals are float32; widen through the shortest decimal that identifies
// the float so that 0.74 reads back as 0.74.
double widen(float value) {
  if (!std::isfinite(value)) return value;
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  double out = value;
  if (ec == std::errc()) std::from_chars(buf, end, out);
  return out;
}

constexpr std::int16_t kDtUInt8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;
constexpr std::int16_t kDtFloat64 = 64;

template <typename T>
T byteswap(T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), &value, sizeof(T));
  std::reverse(raw.begin(), raw.end());
  std::memcpy(&value, raw.data(), sizeof(T));
  return value;
}

class FieldReader {
 public:
  FieldReader(std::span<const std::uint8_t> bytes, bool swap)
      : bytes_(bytes), swap_(swap) {}

  template <typename T>
  T get(std::size_t offset) const {
    T value;
    std::memcpy(&value, bytes_.data() + offset, sizeof(T));
    return swap_ ? byteswap(value) : value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  bool swap_;
};

class FieldWriter {
 public:
  explicit FieldWriter(std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <typename T>
  void put(std::size_t offset, T value) {
    std::memcpy(bytes_.data() + offset, &value, sizeof(T));
  }

 private:
  std::vector<std::uint8_t>& bytes_;
};

std::int16_t datatype_code(ElementKind kind) {
  switch (kind) {
    case ElementKind::kUInt8: return kDtUInt8;
    case ElementKind::kInt16: return kDtInt16;
    case ElementKind::kFloat32: return kDtFloat32;
    case ElementKind::kFloat64: return kDtFloat64;
  }
  throw NiftiError(NiftiErrc::kUnsupportedDatatype, "unknown element kind");
}

std::size_t element_size(std::int16_t datatype) {
  switch (datatype) {
    case kDtUInt8: return 1;
    case kDtInt16: return 2;
    case kDtFloat32: return 4;
    case kDtFloat64: return 8;
    default:
      throw NiftiError(NiftiErrc::kUnsupportedDatatype,
                       "datatype code " + std::to_string(datatype));
  }
}

template <typename T>
std::vector<T> decode_payload(std::span<const std::uint8_t> raw, std::size_t n,
                              bool swap) {
  std::vector<T> out(n);
  std::memcpy(out.data(), raw.data(), n * sizeof(T));
  if (swap && sizeof(T) > 1) {
    for (auto& v : out) v = byteswap(v);
  }
  return out;
}

template <typename T>
std::vector<T> apply_scaling(const std::vector<T>& in, double slope, double inter) {
  std::vector<T> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = static_cast<T>(static_cast<double>(in[i]) * slope + inter);
  }
  return out;
}

template <typename From>
std::vector<float> scale_to_float(const std::vector<From>& in, double slope,
                                  double inter) {
  std::vector<float> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = static_cast<float>(static_cast<double>(in[i]) * slope + inter);
  }
  return out;
}

Shape3 spatial_shape(const NiftiHeader& h) {
  Shape3 shape{};
  for (int a = 0; a < 3; ++a) shape[a] = static_cast<std::size_t>(h.dim[a + 1]);
  return shape;
}

}  // namespace

std::string_view to_string(NiftiErrc code) {
  switch (code) {
    case NiftiErrc::kUnreadable: return "unreadable file";
    case NiftiErrc::kInvalidHeader: return "invalid header";
    case NiftiErrc::kBadMagic: return "bad magic";
    case NiftiErrc::kUnsupportedDatatype: return "unsupported datatype";
    case NiftiErrc::kBadDimensions: return "bad dimensions";
    case NiftiErrc::kTruncatedPayload: return "truncated payload";
  }
  return "nifti error";
}

NiftiError::NiftiError(NiftiErrc code, const std::string& detail)
    : ValidationError("nifti: " + std::string(to_string(code)) +
                      (detail.empty() ? "" : ": " + detail)),
      code_(code) {}

NiftiHeader parse_nifti_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kNiftiHeaderSize) {
    throw NiftiError(NiftiErrc::kTruncatedPayload,
                     "file shorter than the 348-byte header");
  }
  std::int32_t sizeof_hdr;
  std::memcpy(&sizeof_hdr, bytes.data(), sizeof sizeof_hdr);
  bool swap = false;
  if (sizeof_hdr != static_cast<std::int32_t>(kNiftiHeaderSize)) {
    if (byteswap(sizeof_hdr) != static_cast<std::int32_t>(kNiftiHeaderSize)) {
      throw NiftiError(NiftiErrc::kInvalidHeader,
                       "sizeof_hdr is " + std::to_string(sizeof_hdr));
    }
    swap = true;
  }
  const FieldReader r(bytes, swap);
  NiftiHeader h;
  // Host byte order is little-endian on every platform we build for.
  h.big_endian = swap;
  for (int i = 0; i < 8; ++i) h.dim[i] = r.get<std::int16_t>(40 + 2 * i);
  h.datatype = r.get<std::int16_t>(70);
  h.bitpix = r.get<std::int16_t>(72);
  for (int i = 0; i < 8; ++i) h.pixdim[i] = r.get<float>(76 + 4 * i);
  h.vox_offset = r.get<float>(108);
  h.scl_slope = r.get<float>(112);
  h.scl_inter = r.get<float>(116);
  h.qform_code = r.get<std::int16_t>(252);
  h.sform_code = r.get<std::int16_t>(254);
  for (int i = 0; i < 3; ++i) h.quatern[i] = r.get<float>(256 + 4 * i);
  for (int i = 0; i < 3; ++i) h.qoffset[i] = r.get<float>(268 + 4 * i);
  for (int row = 0; row < 3; ++row) {
    for (int c = 0; c < 4; ++c) h.srow[row][c] = r.get<float>(280 + 16 * row + 4 * c);
  }
  std::memcpy(h.magic.data(), bytes.data() + 344, 4);

  if (h.magic != std::array<char, 4>{'n', '+', '1', '\0'}) {
    std::string shown;
    for (char c : h.magic) {
      if (c != '\0') shown.push_back(c);
    }
    throw NiftiError(NiftiErrc::kBadMagic, "magic is \"" + shown + "\"");
  }
  element_size(h.datatype);  // throws on unsupported codes

  const int ndim = h.dim[0];
  if (ndim < 3 || ndim > 7) {
    throw NiftiError(NiftiErrc::kBadDimensions,
                     "dim[0] = " + std::to_string(ndim) + ", need 3 spatial dims");
  }
  for (int a = 1; a <= 3; ++a) {
    if (h.dim[a] <= 0) {
      throw NiftiError(NiftiErrc::kBadDimensions,
                       "dim[" + std::to_string(a) + "] = " + std::to_string(h.dim[a]));
    }
  }
  for (int a = 4; a <= ndim; ++a) {
    if (h.dim[a] != 1) {
      throw NiftiError(NiftiErrc::kBadDimensions,
                       "non-singleton dim[" + std::to_string(a) + "] = " +
                           std::to_string(h.dim[a]));
    }
  }
  for (int a = 1; a <= 3; ++a) {
    if (!(std::fabs(h.pixdim[a]) > 0.0f) || !std::isfinite(h.pixdim[a])) {
      throw NiftiError(NiftiErrc::kInvalidHeader,
                       "pixdim[" + std::to_string(a) + "] must be non-zero");
    }
  }
  if (!(h.vox_offset >= static_cast<float>(kNiftiMinVoxOffset))) {
    throw NiftiError(NiftiErrc::kInvalidHeader,
                     "vox_offset " + std::to_string(h.vox_offset) + " < 352");
  }
  return h;
}

Volume decode_nifti(std::span<const std::uint8_t> bytes,
                    std::vector<std::string>* warnings) {
  const NiftiHeader h = parse_nifti_header(bytes);
  const Shape3 shape = spatial_shape(h);
  const std::size_t n = voxel_count(shape);
  const std::size_t esize = element_size(h.datatype);
  const auto offset = static_cast<std::size_t>(h.vox_offset);
  if (bytes.size() < offset || bytes.size() - offset < n * esize) {
    throw NiftiError(NiftiErrc::kTruncatedPayload,
                     "need " + std::to_string(n * esize) + " payload bytes at offset " +
                         std::to_string(offset) + ", file has " +
                         std::to_string(bytes.size()));
  }
  const Vec3 spacing{widen(std::fabs(h.pixdim[1])), widen(std::fabs(h.pixdim[2])),
                     widen(std::fabs(h.pixdim[3]))};

  Vec3 origin{0.0, 0.0, 0.0};
  bool rotated = false;
  if (h.sform_code > 0) {
    for (int row = 0; row < 3; ++row) {
      origin[row] = widen(h.srow[row][3]);
      for (int c = 0; c < 3; ++c) {
        const double expected = row == c ? spacing[row] : 0.0;
        if (h.srow[row][c] != static_cast<float>(expected)) rotated = true;
      }
    }
  } else if (h.qform_code > 0) {
    for (int a = 0; a < 3; ++a) origin[a] = widen(h.qoffset[a]);
    rotated = h.quatern[0] != 0.0f || h.quatern[1] != 0.0f || h.quatern[2] != 0.0f ||
              h.pixdim[0] < 0.0f;
  }
  if (rotated && warnings != nullptr) {
    warnings->push_back(
        "nifti: orientation contains rotation or flips; only voxel sizes and "
        "translation are used");
  }

  const auto raw = bytes.subspan(offset, n * esize);
  const bool swap = h.big_endian;
  const double slope = h.scl_slope;
  const double inter = h.scl_inter;
  const bool scaled = std::isfinite(slope) && std::isfinite(inter) && slope != 0.0 &&
                      !(slope == 1.0 && inter == 0.0);

  Volume::Buffer buffer;
  switch (h.datatype) {
    case kDtUInt8: {
      auto v = decode_payload<std::uint8_t>(raw, n, swap);
      if (scaled) {
        buffer = scale_to_float(v, slope, inter);
      } else {
        buffer = std::move(v);
      }
      break;
    }
    case kDtInt16: {
      auto v = decode_payload<std::int16_t>(raw, n, swap);
      if (scaled) {
        buffer = scale_to_float(v, slope, inter);
      } else {
        buffer = std::move(v);
      }
      break;
    }
    case kDtFloat32: {
      auto v = decode_payload<float>(raw, n, swap);
      buffer = scaled ? apply_scaling(v, slope, inter) : std::move(v);
      break;
    }
    default: {
      auto v = decode_payload<double>(raw, n, swap);
      buffer = scaled ? apply_scaling(v, slope, inter) : std::move(v);
      break;
    }
  }
  return Volume(shape, spacing, origin, std::move(buffer));
}

std::vector<std::uint8_t> encode_nifti(const Volume& volume) {
  const std::int16_t datatype = datatype_code(volume.kind());
  const std::size_t esize = element_size(datatype);
  const std::size_t payload = volume.size() * esize;
  std::vector<std::uint8_t> out(kNiftiMinVoxOffset + payload, 0);
  FieldWriter w(out);

  for (int a = 0; a < 3; ++a) {
    if (volume.shape()[a] > 32767) {
      throw NiftiError(NiftiErrc::kBadDimensions, "dimension exceeds int16 range");
    }
  }

  w.put<std::int32_t>(0, static_cast<std::int32_t>(kNiftiHeaderSize));
  w.put<char>(38, 'r');
  const std::array<std::int16_t, 8> dim{3,
                                        static_cast<std::int16_t>(volume.shape()[0]),
                                        static_cast<std::int16_t>(volume.shape()[1]),
                                        static_cast<std::int16_t>(volume.shape()[2]),
                                        1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) w.put<std::int16_t>(40 + 2 * i, dim[i]);
  w.put<std::int16_t>(70, datatype);
  w.put<std::int16_t>(72, static_cast<std::int16_t>(esize * 8));
  const std::array<float, 8> pixdim{1.0f,
                                    static_cast<float>(volume.spacing()[0]),
                                    static_cast<float>(volume.spacing()[1]),
                                    static_cast<float>(volume.spacing()[2]),
                                    1.0f, 1.0f, 1.0f, 1.0f};
  for (int i = 0; i < 8; ++i) w.put<float>(76 + 4 * i, pixdim[i]);
  w.put<float>(108, static_cast<float>(kNiftiMinVoxOffset));
  w.put<float>(112, 1.0f);
  w.put<float>(116, 0.0f);
  w.put<char>(123, 2);  // NIFTI_UNITS_MM
  const char descrip[] = "voxeval";
  std::memcpy(out.data() + 148, descrip, sizeof descrip - 1);
  w.put<std::int16_t>(252, 1);
  w.put<std::int16_t>(254, 1);
  for (int a = 0; a < 3; ++a) {
    w.put<float>(268 + 4 * a, static_cast<float>(volume.origin()[a]));
  }
  for (int row = 0; row < 3; ++row) {
    w.put<float>(280 + 16 * row + 4 * row, pixdim[row + 1]);
    w.put<float>(280 + 16 * row + 12, static_cast<float>(volume.origin()[row]));
  }
  const char magic[4] = {'n', '+', '1', '\0'};
  std::memcpy(out.data() + 344, magic, 4);

  std::visit(
      [&](const auto& v) {
        std::memcpy(out.data() + kNiftiMinVoxOffset, v.data(), payload);
      },
      volume.buffer());
  return out;
}

Volume read_volume(const std::filesystem::path& path,
                   std::vector<std::string>* warnings) {
  // gzread passes uncompressed files through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) {
    throw NiftiError(NiftiErrc::kUnreadable, path.string());
  }
  gzbuffer(file, 1 << 17);
  std::vector<std::uint8_t> bytes;
  constexpr unsigned kChunk = 1u << 20;
  for (;;) {
    const std::size_t old = bytes.size();
    bytes.resize(old + kChunk);
    const int got = gzread(file, bytes.data() + old, kChunk);
    if (got < 0) {
      gzclose(file);
      throw NiftiError(NiftiErrc::kUnreadable, path.string() + ": decompression failed");
    }
    bytes.resize(old + static_cast<std::size_t>(got));
    if (got < static_cast<int>(kChunk)) break;
  }
  gzclose(file);
  return decode_nifti(bytes, warnings);
}

void write_volume(const Volume& volume, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_nifti(volume);
  if (path.extension() == ".gz") {
    gzFile file = gzopen(path.c_str(), "wb");
    if (file == nullptr) throw IoError("cannot open " + path.string() + " for writing");
    std::size_t written = 0;
    while (written < bytes.size()) {
      const auto chunk =
          static_cast<unsigned>(std::min<std::size_t>(bytes.size() - written, 1u << 30));
      if (gzwrite(file, bytes.data() + written, chunk) != static_cast<int>(chunk)) {
        gzclose(file);
        throw IoError("write failed: " + path.string());
      }
      written += chunk;
    }
    if (gzclose(file) != Z_OK) throw IoError("write failed: " + path.string());
    return;
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace voxeval

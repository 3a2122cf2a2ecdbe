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

#ifndef VOXEVAL_NIFTI_HPP_
#define VOXEVAL_NIFTI_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "voxeval/error.hpp"
#include "voxeval/volume.hpp"

namespace voxeval {

// Single-file NIfTI-1 ("n+1") reader and writer. Supported datatype codes
// are 2 (uint8), 4 (int16), 16 (float32) and 64 (float64). Files may be
// either byte order and may be gzip-compressed.

enum class NiftiErrc {
  kUnreadable,
  kInvalidHeader,
  kBadMagic,
  kUnsupportedDatatype,
  kBadDimensions,
  kTruncatedPayload,
};

std::string_view to_string(NiftiErrc code);

class NiftiError : public ValidationError {
 public:
  NiftiError(NiftiErrc code, const std::string& detail);
  NiftiErrc code() const { return code_; }

 private:
  NiftiErrc code_;
};

inline constexpr std::size_t kNiftiHeaderSize = 348;
inline constexpr std::size_t kNiftiMinVoxOffset = 352;

struct NiftiHeader {
  std::array<std::int16_t, 8> dim{};
  std::int16_t datatype = 0;
  std::int16_t bitpix = 0;
  std::array<float, 8> pixdim{};
  float vox_offset = 0.0f;
  float scl_slope = 0.0f;
  float scl_inter = 0.0f;
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  std::array<float, 3> quatern{};  // b, c, d
  std::array<float, 3> qoffset{};
  std::array<std::array<float, 4>, 3> srow{};
  std::array<char, 4> magic{};
  bool big_endian = false;
};

// Parses and validates the 348-byte header at the start of `bytes`.
NiftiHeader parse_nifti_header(std::span<const std::uint8_t> bytes);

// Decodes a complete (already decompressed) single-file NIfTI-1 image.
// Rotation/flip components of the qform/sform are not applied; when present
// a message is appended to `warnings`.
Volume decode_nifti(std::span<const std::uint8_t> bytes,
                    std::vector<std::string>* warnings = nullptr);

// Little-endian single-file encoding with identity scaling.
std::vector<std::uint8_t> encode_nifti(const Volume& volume);

Volume read_volume(const std::filesystem::path& path,
                   std::vector<std::string>* warnings = nullptr);

// gzip-compresses iff the path ends in ".gz". Throws IoError on failure.
void write_volume(const Volume& volume, const std::filesystem::path& path);

}  // namespace voxeval

#endif  // VOXEVAL_NIFTI_HPP_

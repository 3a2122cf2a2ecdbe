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

#ifndef VOXEVAL_VOLUME_HPP_
#define VOXEVAL_VOLUME_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace voxeval {

using Vec3 = std::array<double, 3>;
using Shape3 = std::array<std::size_t, 3>;

enum class ElementKind { kUInt8, kInt16, kFloat32, kFloat64 };

std::string_view to_string(ElementKind kind);

inline std::size_t voxel_count(const Shape3& shape) {
  return shape[0] * shape[1] * shape[2];
}

// Dense 3D scalar grid. Voxel (x, y, z) lives at linear index
// x + shape[0] * (y + shape[1] * z), i.e. x varies fastest. `origin` is the
// millimeter position of voxel (0, 0, 0) and `spacing` the millimeter step
// per axis. Instances are immutable once constructed.
class Volume {
 public:
  using Buffer = std::variant<std::vector<std::uint8_t>, std::vector<std::int16_t>,
                              std::vector<float>, std::vector<double>>;

  // Throws ValidationError if the buffer length does not match the shape,
  // a shape component is zero or a spacing component is not strictly positive.
  Volume(Shape3 shape, Vec3 spacing, Vec3 origin, Buffer data);

  static Volume zeros(Shape3 shape, Vec3 spacing, Vec3 origin, ElementKind kind);

  const Shape3& shape() const { return shape_; }
  const Vec3& spacing() const { return spacing_; }
  const Vec3& origin() const { return origin_; }
  ElementKind kind() const { return static_cast<ElementKind>(data_.index()); }
  std::size_t size() const { return voxel_count(shape_); }
  const Buffer& buffer() const { return data_; }

  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    return x + shape_[0] * (y + shape_[1] * z);
  }

  double value(std::size_t i) const;
  double at(std::size_t x, std::size_t y, std::size_t z) const {
    return value(index(x, y, z));
  }

  // Typed view; throws ValidationError when T does not match kind().
  template <typename T>
  std::span<const T> data() const;

  std::vector<double> to_doubles() const;

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  Shape3 shape_;
  Vec3 spacing_;
  Vec3 origin_;
  Buffer data_;
};

// Builds a volume of `kind` from double values, casting each element.
Volume make_volume(Shape3 shape, Vec3 spacing, Vec3 origin, ElementKind kind,
                   std::span<const double> values);

}  // namespace voxeval

#endif  // VOXEVAL_VOLUME_HPP_

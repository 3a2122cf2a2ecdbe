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
#include "voxeval/volume.hpp"

#include <cmath>
#include <string>

#include "voxeval/error.hpp"

namespace voxeval {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::kUInt8: return "uint8";
    case ElementKind::kInt16: return "int16";
    case ElementKind::kFloat32: return "float32";
    case ElementKind::kFloat64: return "float64";
  }
  return "unknown";
}

Volume::Volume(Shape3 shape, Vec3 spacing, Vec3 origin, Buffer data)
    : shape_(shape), spacing_(spacing), origin_(origin), data_(std::move(data)) {
  for (int a = 0; a < 3; ++a) {
    if (shape_[a] == 0) {
      throw ValidationError("volume shape components must be positive");
    }
    if (!(spacing_[a] > 0.0) || !std::isfinite(spacing_[a])) {
      throw ValidationError("volume spacing components must be positive, got " +
                            std::to_string(spacing_[a]));
    }
  }
  const std::size_t n = std::visit([](const auto& v) { return v.size(); }, data_);
  if (n != voxel_count(shape_)) {
    throw ValidationError("volume data length " + std::to_string(n) +
                          " does not match shape product " +
                          std::to_string(voxel_count(shape_)));
  }
}

Volume Volume::zeros(Shape3 shape, Vec3 spacing, Vec3 origin, ElementKind kind) {
  const std::size_t n = voxel_count(shape);
  switch (kind) {
    case ElementKind::kUInt8:
      return Volume(shape, spacing, origin, std::vector<std::uint8_t>(n));
    case ElementKind::kInt16:
      return Volume(shape, spacing, origin, std::vector<std::int16_t>(n));
    case ElementKind::kFloat32:
      return Volume(shape, spacing, origin, std::vector<float>(n));
    case ElementKind::kFloat64:
      break;
  }
  return Volume(shape, spacing, origin, std::vector<double>(n));
}

double Volume::value(std::size_t i) const {
  return std::visit([i](const auto& v) { return static_cast<double>(v[i]); }, data_);
}

template <typename T>
std::span<const T> Volume::data() const {
  const auto* v = std::get_if<std::vector<T>>(&data_);
  if (v == nullptr) {
    throw ValidationError("volume element kind is " + std::string(to_string(kind())));
  }
  return *v;
}

template std::span<const std::uint8_t> Volume::data<std::uint8_t>() const;
template std::span<const std::int16_t> Volume::data<std::int16_t>() const;
template std::span<const float> Volume::data<float>() const;
template std::span<const double> Volume::data<double>() const;

std::vector<double> Volume::to_doubles() const {
  return std::visit(
      [](const auto& v) { return std::vector<double>(v.begin(), v.end()); }, data_);
}

namespace {

template <typename T>
std::vector<T> cast_all(std::span<const double> values) {
  std::vector<T> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<T>(values[i]);
  return out;
}

}  // namespace

Volume make_volume(Shape3 shape, Vec3 spacing, Vec3 origin, ElementKind kind,
                   std::span<const double> values) {
  switch (kind) {
    case ElementKind::kUInt8:
      return Volume(shape, spacing, origin, cast_all<std::uint8_t>(values));
    case ElementKind::kInt16:
      return Volume(shape, spacing, origin, cast_all<std::int16_t>(values));
    case ElementKind::kFloat32:
      return Volume(shape, spacing, origin, cast_all<float>(values));
    case ElementKind::kFloat64:
      break;
  }
  return Volume(shape, spacing, origin, std::vector<double>(values.begin(), values.end()));
}

}  // namespace voxeval

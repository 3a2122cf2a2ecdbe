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

#ifndef VOXEVAL_GEOMETRY_HPP_
#define VOXEVAL_GEOMETRY_HPP_

#include <optional>
#include <string>

#include "voxeval/volume.hpp"

namespace voxeval {

// Axis-aligned box in millimeters, half-open on every axis: [min, max).
struct BoundingBox3D {
  Vec3 min{};
  Vec3 max{};

  // Throws ValidationError unless min < max on every axis (and all finite).
  void validate() const;
  bool valid() const;

  friend bool operator==(const BoundingBox3D&, const BoundingBox3D&) = default;
};

double box_volume(const BoundingBox3D& box);
double box_intersection(const BoundingBox3D& a, const BoundingBox3D& b);

// Intersection over union in [0, 1]. Boxes that only share a face, edge or
// corner do not overlap.
double box_iou(const BoundingBox3D& a, const BoundingBox3D& b);

Vec3 box_center(const BoundingBox3D& box);

// Largest edge length; the diameter proxy for mask-derived objects.
double box_max_edge(const BoundingBox3D& box);

double distance(const Vec3& a, const Vec3& b);

struct GroundTruthObject {
  std::string image_id;
  int class_id = 0;
  BoundingBox3D box;
  Vec3 center{};
  std::optional<double> diameter;
  bool ignore = false;

  // Object with center at the box midpoint.
  static GroundTruthObject from_box(std::string image_id, int class_id,
                                    const BoundingBox3D& box,
                                    std::optional<double> diameter = std::nullopt,
                                    bool ignore = false);

  // Throws ValidationError on an invalid box or non-positive diameter.
  void validate() const;

  // `diameter` when present, box_max_edge(box) otherwise.
  double effective_diameter() const;

  friend bool operator==(const GroundTruthObject&, const GroundTruthObject&) = default;
};

}  // namespace voxeval

#endif  // VOXEVAL_GEOMETRY_HPP_

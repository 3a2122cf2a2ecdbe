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
#include "voxeval/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "voxeval/error.hpp"

namespace voxeval {

bool BoundingBox3D::valid() const {
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(min[a]) || !std::isfinite(max[a]) || !(min[a] < max[a])) {
      return false;
    }
  }
  return true;
}

void BoundingBox3D::validate() const {
  if (!valid()) {
    throw ValidationError("invalid box: need finite min < max on every axis");
  }
}

double box_volume(const BoundingBox3D& box) {
  return (box.max[0] - box.min[0]) * (box.max[1] - box.min[1]) *
         (box.max[2] - box.min[2]);
}

double box_intersection(const BoundingBox3D& a, const BoundingBox3D& b) {
  double v = 1.0;
  for (int i = 0; i < 3; ++i) {
    const double lo = std::max(a.min[i], b.min[i]);
    const double hi = std::min(a.max[i], b.max[i]);
    if (!(hi > lo)) return 0.0;
    v *= hi - lo;
  }
  return v;
}

double box_iou(const BoundingBox3D& a, const BoundingBox3D& b) {
  const double inter = box_intersection(a, b);
  if (inter == 0.0) return 0.0;
  const double uni = box_volume(a) + box_volume(b) - inter;
  return std::min(1.0, inter / uni);
}

Vec3 box_center(const BoundingBox3D& box) {
  return {(box.min[0] + box.max[0]) / 2.0, (box.min[1] + box.max[1]) / 2.0,
          (box.min[2] + box.max[2]) / 2.0};
}

double box_max_edge(const BoundingBox3D& box) {
  return std::max({box.max[0] - box.min[0], box.max[1] - box.min[1],
                   box.max[2] - box.min[2]});
}

double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

GroundTruthObject GroundTruthObject::from_box(std::string image_id, int class_id,
                                              const BoundingBox3D& box,
                                              std::optional<double> diameter,
                                              bool ignore) {
  GroundTruthObject gt;
  gt.image_id = std::move(image_id);
  gt.class_id = class_id;
  gt.box = box;
  gt.center = box_center(box);
  gt.diameter = diameter;
  gt.ignore = ignore;
  return gt;
}

void GroundTruthObject::validate() const {
  box.validate();
  if (diameter && !(*diameter > 0.0)) {
    throw ValidationError("ground truth diameter must be positive in image " + image_id);
  }
}

double GroundTruthObject::effective_diameter() const {
  return diameter ? *diameter : box_max_edge(box);
}

}  // namespace voxeval

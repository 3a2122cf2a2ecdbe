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

#ifndef VOXEVAL_LABELING_HPP_
#define VOXEVAL_LABELING_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "voxeval/geometry.hpp"
#include "voxeval/volume.hpp"

namespace voxeval {

enum class Connectivity { k6 = 6, k18 = 18, k26 = 26 };

inline constexpr Connectivity kDefaultConnectivity = Connectivity::k26;

// Throws ConfigError for anything other than 6, 18 or 26.
Connectivity connectivity_from_int(int value);

struct InstanceMap {
  Shape3 shape{};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{};
  // Same linear layout as Volume; 0 is background, instances are 1..count.
  std::vector<std::uint32_t> labels;
  std::size_t count = 0;
  Connectivity connectivity = kDefaultConnectivity;
};

// Labels the voxels whose value is one of `foreground_values`. Two voxels share
// an instance iff a foreground path joins them under `connectivity`. Ids are
// assigned in ascending order of each component's first voxel in linear
// (x fastest, then y, then z) order.
InstanceMap connected_components(const Volume& mask, std::span<const int> foreground_values,
                                 Connectivity connectivity = kDefaultConnectivity);

inline InstanceMap connected_components(const Volume& mask, int foreground_value,
                                        Connectivity connectivity = kDefaultConnectivity) {
  const int values[] = {foreground_value};
  return connected_components(mask, values, connectivity);
}

// One object per instance, in id order. The box spans the tight voxel bounds:
// min = index * spacing + origin, max = (index + 1) * spacing + origin. The
// diameter is the largest box edge.
std::vector<GroundTruthObject> instances_to_objects(const InstanceMap& imap, int class_id,
                                                    const std::string& image_id = {});

// Labels each class independently. `class_of_label` maps mask values to class
// ids; several mask values may map onto one class. Objects are ordered by
// class id, then instance id.
std::vector<GroundTruthObject> extract_objects(const Volume& mask,
                                               const std::map<int, int>& class_of_label,
                                               const std::string& image_id,
                                               Connectivity connectivity = kDefaultConnectivity);

}  // namespace voxeval

#endif  // VOXEVAL_LABELING_HPP_

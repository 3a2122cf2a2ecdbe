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

#ifndef VOXEVAL_POSTPROCESSING_HPP_
#define VOXEVAL_POSTPROCESSING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "voxeval/matching.hpp"

namespace voxeval {

struct PostprocessConfig {
  double min_score = 0.0;
  double nms_iou = 0.1;
  std::optional<std::size_t> max_detections_per_image;

  // Throws ConfigError unless min_score lies in [0, 1] and nms_iou in (0, 1].
  void validate() const;
};

// Greedy NMS over detections of one image and class: visit by descending score
// (stable), keep a box iff its IoU with every kept box is below `iou_thresh`.
// Output is in descending score order.
std::vector<Detection> nms(std::span<const Detection> dets, double iou_thresh);

// Orders by image id, then class id, then descending score (stable).
void canonical_sort(std::vector<Detection>& dets);

// Score filter (keeps score >= min_score), class-wise NMS per image, then the
// optional per-image top-k by score. Output is in canonical order.
std::vector<Detection> apply_postprocess(std::span<const Detection> dets,
                                         const PostprocessConfig& config,
                                         std::size_t threads = 1);

}  // namespace voxeval

#endif  // VOXEVAL_POSTPROCESSING_HPP_

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
#include "voxeval/postprocessing.hpp"

#include <algorithm>
#include <numeric>

#include "voxeval/error.hpp"
#include "voxeval/parallel.hpp"

namespace voxeval {

void PostprocessConfig::validate() const {
  if (!(min_score >= 0.0 && min_score <= 1.0)) {
    throw ConfigError("min_score must lie in [0, 1]");
  }
  if (!(nms_iou > 0.0 && nms_iou <= 1.0)) {
    throw ConfigError("nms_iou must lie in (0, 1]");
  }
}

std::vector<Detection> nms(std::span<const Detection> dets, double iou_thresh) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  std::vector<Detection> kept;
  for (std::size_t i : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return box_iou(k.box, dets[i].box) >= iou_thresh;
    });
    if (!suppressed) kept.push_back(dets[i]);
  }
  return kept;
}

void canonical_sort(std::vector<Detection>& dets) {
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    return a.score > b.score;
  });
}

std::vector<Detection> apply_postprocess(std::span<const Detection> dets,
                                         const PostprocessConfig& config,
                                         std::size_t threads) {
  config.validate();
  std::vector<Detection> filtered;
  for (const auto& d : dets) {
    if (d.score >= config.min_score) filtered.push_back(d);
  }
  canonical_sort(filtered);

  // Contiguous (image, class) groups.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    if (i == 0 || filtered[i].image_id != filtered[i - 1].image_id ||
        filtered[i].class_id != filtered[i - 1].class_id) {
      groups.push_back({i, i + 1});
    } else {
      groups.back().second = i + 1;
    }
  }
  std::vector<std::vector<Detection>> kept(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t g) {
    const auto [begin, end] = groups[g];
    kept[g] = nms(std::span<const Detection>(filtered).subspan(begin, end - begin),
                  config.nms_iou);
  });

  std::vector<Detection> out;
  for (std::size_t g = 0; g < groups.size();) {
    // All class groups of one image.
    std::size_t h = g;
    std::vector<Detection> image_dets;
    while (h < groups.size() &&
           filtered[groups[h].first].image_id == filtered[groups[g].first].image_id) {
      image_dets.insert(image_dets.end(), kept[h].begin(), kept[h].end());
      ++h;
    }
    if (config.max_detections_per_image &&
        image_dets.size() > *config.max_detections_per_image) {
      std::stable_sort(image_dets.begin(), image_dets.end(),
                       [](const Detection& a, const Detection& b) { return a.score > b.score; });
      image_dets.resize(*config.max_detections_per_image);
      canonical_sort(image_dets);
    }
    out.insert(out.end(), image_dets.begin(), image_dets.end());
    g = h;
  }
  return out;
}

}  // namespace voxeval

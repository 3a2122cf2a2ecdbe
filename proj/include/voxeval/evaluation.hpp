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

#ifndef VOXEVAL_EVALUATION_HPP_
#define VOXEVAL_EVALUATION_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "voxeval/geometry.hpp"
#include "voxeval/matching.hpp"
#include "voxeval/metrics.hpp"

namespace voxeval {

// The image universe of an evaluation with its ground truth. Image order is
// significant: it fixes the pooling order and therefore tie handling.
class Dataset {
 public:
  Dataset() = default;
  // Throws ValidationError on duplicate image ids or ground truth whose
  // image_id disagrees with its slot.
  Dataset(std::vector<std::string> image_ids,
          std::vector<std::vector<GroundTruthObject>> ground_truth);

  std::size_t size() const { return image_ids_.size(); }
  const std::vector<std::string>& image_ids() const { return image_ids_; }
  const std::vector<GroundTruthObject>& ground_truth(std::size_t image) const {
    return ground_truth_[image];
  }
  // Throws ValidationError for unknown ids.
  std::size_t index_of(const std::string& image_id) const;
  bool contains(const std::string& image_id) const { return index_.contains(image_id); }

  // Ascending class ids carried by the ground truth.
  std::vector<int> class_ids() const;
  std::size_t object_count() const;

 private:
  std::vector<std::string> image_ids_;
  std::vector<std::vector<GroundTruthObject>> ground_truth_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct MatchSettings {
  MatchCriterion criterion = MatchCriterion::iou(kDefaultIouThreshold);
  DuplicatePolicy duplicates = DuplicatePolicy::kFalsePositive;
};

// Match results for every (class, image) pair of a dataset.
struct MatchTable {
  std::vector<int> class_ids;                    // ascending
  std::vector<std::vector<MatchResult>> results;  // [class][image]
  std::size_t n_images = 0;
};

// Matches every (image, class) pair in parallel. Classes are the union of
// ground-truth classes, detection classes and `extra_classes`. Throws
// ValidationError for detections on images outside the dataset.
MatchTable match_dataset(const Dataset& dataset, std::span<const Detection> detections,
                         const MatchSettings& settings, std::size_t threads = 1,
                         std::span<const int> extra_classes = {});

struct ClassResult {
  int class_id = 0;
  std::size_t n_gt = 0;
  std::size_t n_predictions = 0;  // excluding ignored
  bool has_ground_truth = false;
  double ap = 0.0;
  std::vector<double> sensitivities;
  double froc = 0.0;
};

// mAP and the FROC score average the per-class values over classes with
// ground truth; `sensitivities` is the per-threshold mean over those classes.
struct EvaluationResult {
  std::vector<ClassResult> classes;
  double map = 0.0;
  double froc = 0.0;
  std::vector<double> sensitivities;
  std::vector<double> fppi_thresholds;
  std::size_t n_images = 0;
  std::size_t n_gt = 0;
};

// Throws NoGroundTruthError if no class has ground truth.
EvaluationResult summarize(const MatchTable& table, const EvalConfig& config);

EvaluationResult evaluate(const Dataset& dataset, std::span<const Detection> detections,
                          const MatchSettings& settings, const EvalConfig& config,
                          std::size_t threads = 1);

}  // namespace voxeval

#endif  // VOXEVAL_EVALUATION_HPP_

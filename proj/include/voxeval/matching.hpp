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

#ifndef VOXEVAL_MATCHING_HPP_
#define VOXEVAL_MATCHING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxeval/geometry.hpp"

namespace voxeval {

struct Detection {
  std::string image_id;
  int class_id = 0;
  BoundingBox3D box;
  double score = 0.0;

  // Throws ValidationError on an invalid box or a score outside [0, 1].
  void validate() const;

  friend bool operator==(const Detection&, const Detection&) = default;
};

enum class CriterionKind {
  kIouThreshold,        // IoU >= threshold
  kCenterHalfDiameter,  // center distance <= diameter / 2
  kCenterInRadius,      // center distance <= radius
};

enum class RadiusSource { kGroundTruthDiameter, kExplicit };

struct MatchCriterion {
  CriterionKind kind = CriterionKind::kIouThreshold;
  double iou_threshold = 0.1;
  RadiusSource radius_source = RadiusSource::kGroundTruthDiameter;
  double radius = 0.0;  // only for RadiusSource::kExplicit

  static MatchCriterion iou(double threshold) {
    return {CriterionKind::kIouThreshold, threshold, RadiusSource::kGroundTruthDiameter, 0.0};
  }
  static MatchCriterion center_half_diameter() {
    return {CriterionKind::kCenterHalfDiameter, 0.0, RadiusSource::kGroundTruthDiameter, 0.0};
  }
  static MatchCriterion center_in_radius() {
    return {CriterionKind::kCenterInRadius, 0.0, RadiusSource::kGroundTruthDiameter, 0.0};
  }
  static MatchCriterion center_in_radius(double r) {
    return {CriterionKind::kCenterInRadius, 0.0, RadiusSource::kExplicit, r};
  }

  // Throws ConfigError if the threshold is outside (0, 1] or an explicit radius
  // is not positive.
  void validate() const;

  std::string describe() const;

  friend bool operator==(const MatchCriterion&, const MatchCriterion&) = default;
};

// What happens to a prediction whose only qualifying ground truth objects are
// already matched: a false positive (COCO / mAP) or ignored (LUNA16 / PN9).
enum class DuplicatePolicy { kFalsePositive, kIgnore };

std::string_view to_string(DuplicatePolicy policy);
DuplicatePolicy duplicate_policy_from_string(std::string_view name);

enum class MatchOutcome { kTruePositive, kFalsePositive, kIgnored };

struct PredictionMatch {
  double score = 0.0;
  MatchOutcome outcome = MatchOutcome::kFalsePositive;
  std::optional<std::size_t> gt_index;  // matched (or absorbing) ground truth
};

struct MatchResult {
  std::vector<PredictionMatch> predictions;  // in input order
  std::vector<bool> gt_hit;                  // in input order
  std::size_t n_gt = 0;                      // non-ignored ground truth
  std::size_t n_tp = 0;
  std::size_t n_fp = 0;
  std::size_t n_ignored = 0;
};

// Greedy matching for one image and class. Predictions are visited by
// descending score (ties keep input order) and take the best qualifying
// unmatched, non-ignored ground truth: highest IoU or smallest center distance,
// lowest index on ties. Otherwise a prediction that qualifies against an
// ignored object is ignored, one that qualifies only against already matched
// objects follows `duplicates`, and anything else is a false positive.
// Throws ValidationError when image or class ids are mixed.
MatchResult match_image(std::span<const Detection> preds,
                        std::span<const GroundTruthObject> gts,
                        const MatchCriterion& criterion,
                        DuplicatePolicy duplicates = DuplicatePolicy::kFalsePositive);

}  // namespace voxeval

#endif  // VOXEVAL_MATCHING_HPP_

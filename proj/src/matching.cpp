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
#include "voxeval/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "voxeval/error.hpp"

namespace voxeval {

void Detection::validate() const {
  if (!box.valid()) {
    throw ValidationError("invalid box in detection for image " + image_id);
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    std::ostringstream os;
    os << "detection score " << score << " outside [0, 1] for image " << image_id;
    throw ValidationError(os.str());
  }
}

void MatchCriterion::validate() const {
  if (kind == CriterionKind::kIouThreshold && !(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("IoU threshold must lie in (0, 1]");
  }
  if (kind == CriterionKind::kCenterInRadius && radius_source == RadiusSource::kExplicit &&
      !(radius > 0.0)) {
    throw ConfigError("explicit match radius must be positive");
  }
}

std::string MatchCriterion::describe() const {
  std::ostringstream os;
  switch (kind) {
    case CriterionKind::kIouThreshold:
      os << "iou>=" << iou_threshold;
      break;
    case CriterionKind::kCenterHalfDiameter:
      os << "center_half_diameter";
      break;
    case CriterionKind::kCenterInRadius:
      os << "center_in_radius";
      if (radius_source == RadiusSource::kExplicit) os << "(r=" << radius << ")";
      break;
  }
  return os.str();
}

std::string_view to_string(DuplicatePolicy policy) {
  return policy == DuplicatePolicy::kFalsePositive ? "fp" : "ignore";
}

DuplicatePolicy duplicate_policy_from_string(std::string_view name) {
  if (name == "fp") return DuplicatePolicy::kFalsePositive;
  if (name == "ignore") return DuplicatePolicy::kIgnore;
  throw ConfigError("duplicate policy must be fp or ignore, got " + std::string(name));
}

namespace {

// Larger is better. NaN means the pair does not qualify.
double affinity(const Detection& pred, const GroundTruthObject& gt,
                const MatchCriterion& criterion) {
  switch (criterion.kind) {
    case CriterionKind::kIouThreshold: {
      const double iou = box_iou(pred.box, gt.box);
      return iou >= criterion.iou_threshold ? iou : std::nan("");
    }
    case CriterionKind::kCenterHalfDiameter: {
      const double d = distance(box_center(pred.box), gt.center);
      return d <= gt.effective_diameter() / 2.0 ? -d : std::nan("");
    }
    case CriterionKind::kCenterInRadius: {
      const double r = criterion.radius_source == RadiusSource::kExplicit
                           ? criterion.radius
                           : gt.effective_diameter() / 2.0;
      const double d = distance(box_center(pred.box), gt.center);
      return d <= r ? -d : std::nan("");
    }
  }
  return std::nan("");
}

}  // namespace

MatchResult match_image(std::span<const Detection> preds,
                        std::span<const GroundTruthObject> gts,
                        const MatchCriterion& criterion, DuplicatePolicy duplicates) {
  const std::string* image_id = nullptr;
  const int* class_id = nullptr;
  auto check = [&](const std::string& img, const int& cls) {
    if (image_id == nullptr) {
      image_id = &img;
      class_id = &cls;
      return;
    }
    if (img != *image_id || cls != *class_id) {
      throw ValidationError("match_image: mixed image/class ids (" + *image_id + "/" +
                            std::to_string(*class_id) + " vs " + img + "/" +
                            std::to_string(cls) + ")");
    }
  };
  for (const auto& p : preds) check(p.image_id, p.class_id);
  for (const auto& g : gts) check(g.image_id, g.class_id);

  MatchResult result;
  result.predictions.resize(preds.size());
  result.gt_hit.assign(gts.size(), false);
  for (const auto& g : gts) {
    if (!g.ignore) ++result.n_gt;
  }

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].score > preds[b].score;
  });

  for (std::size_t p : order) {
    PredictionMatch& m = result.predictions[p];
    m.score = preds[p].score;

    std::optional<std::size_t> best;
    double best_affinity = 0.0;
    std::optional<std::size_t> ignored_hit;
    std::optional<std::size_t> duplicate_hit;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double a = affinity(preds[p], gts[g], criterion);
      if (std::isnan(a)) continue;
      if (gts[g].ignore) {
        if (!ignored_hit) ignored_hit = g;
      } else if (result.gt_hit[g]) {
        if (!duplicate_hit) duplicate_hit = g;
      } else if (!best || a > best_affinity) {
        best = g;
        best_affinity = a;
      }
    }

    if (best) {
      m.outcome = MatchOutcome::kTruePositive;
      m.gt_index = best;
      result.gt_hit[*best] = true;
      ++result.n_tp;
    } else if (ignored_hit) {
      m.outcome = MatchOutcome::kIgnored;
      m.gt_index = ignored_hit;
      ++result.n_ignored;
    } else if (duplicate_hit && duplicates == DuplicatePolicy::kIgnore) {
      m.outcome = MatchOutcome::kIgnored;
      m.gt_index = duplicate_hit;
      ++result.n_ignored;
    } else {
      m.outcome = MatchOutcome::kFalsePositive;
      ++result.n_fp;
    }
  }
  return result;
}

}  // namespace voxeval

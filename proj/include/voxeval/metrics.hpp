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

#ifndef VOXEVAL_METRICS_HPP_
#define VOXEVAL_METRICS_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "voxeval/error.hpp"
#include "voxeval/matching.hpp"

namespace voxeval {

inline constexpr double kDefaultIouThreshold = 0.1;
inline constexpr std::array<double, 7> kDefaultFppiThresholds = {0.125, 0.25, 0.5, 1.0,
                                                                 2.0,   4.0,  8.0};

enum class ApInterpolation { kAllPoints, kPoints101 };

std::string_view to_string(ApInterpolation mode);
ApInterpolation ap_interpolation_from_string(std::string_view name);

struct EvalConfig {
  double iou_threshold = kDefaultIouThreshold;
  std::vector<double> fppi_thresholds{kDefaultFppiThresholds.begin(),
                                      kDefaultFppiThresholds.end()};
  ApInterpolation ap_interpolation = ApInterpolation::kAllPoints;

  // Throws ConfigError unless thresholds are positive and strictly increasing
  // and the IoU threshold lies in (0, 1].
  void validate() const;
};

// A class without any non-ignored ground truth has no defined AP or
// sensitivity. Callers exclude such classes instead of scoring them 0.
class NoGroundTruthError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct RankedOutcome {
  double score = 0.0;
  bool true_positive = false;
};

// Non-ignored predictions of all images pooled in image order, then input
// order, and stably sorted by descending score.
std::vector<RankedOutcome> rank_predictions(std::span<const MatchResult> matches);

struct OperatingPoint {
  double score = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

// One operating point per distinct score cutoff; tied predictions enter
// together, so the curve does not depend on the order of equal scores.
struct PRCurve {
  std::vector<OperatingPoint> points;
  std::size_t n_gt = 0;
};

// Throws NoGroundTruthError when the matches hold no non-ignored ground truth.
PRCurve pr_curve(std::span<const MatchResult> matches);
PRCurve pr_curve_from_ranked(std::span<const RankedOutcome> ranked, std::size_t n_gt);

// kAllPoints integrates the monotone precision envelope exactly over every
// recall step; kPoints101 averages the envelope at recall 0.00, 0.01, ..., 1.00.
// An empty curve scores 0.
double average_precision(const PRCurve& curve,
                         ApInterpolation mode = ApInterpolation::kAllPoints);

// Unweighted mean; throws NoGroundTruthError when `per_class` is empty.
double mean_average_precision(std::span<const double> per_class);

struct FrocResult {
  std::vector<double> sensitivities;  // one per FPPI threshold
  double score = 0.0;                 // mean of sensitivities
};

// Operating points are taken at every distinct score cutoff (plus the empty
// cutoff). The sensitivity at threshold t is the best sensitivity among
// points with FPPI <= t, or 0.
FrocResult froc(std::span<const MatchResult> matches, std::size_t n_images,
                std::span<const double> thresholds);
FrocResult froc_from_ranked(std::span<const RankedOutcome> ranked, std::size_t n_gt,
                            std::size_t n_images, std::span<const double> thresholds);

}  // namespace voxeval

#endif  // VOXEVAL_METRICS_HPP_

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
#include "voxeval/metrics.hpp"

#include <algorithm>
#include <string>

namespace voxeval {

std::string_view to_string(ApInterpolation mode) {
  return mode == ApInterpolation::kAllPoints ? "all_points" : "points_101";
}

ApInterpolation ap_interpolation_from_string(std::string_view name) {
  if (name == "all_points") return ApInterpolation::kAllPoints;
  if (name == "points_101") return ApInterpolation::kPoints101;
  throw ConfigError("AP interpolation must be all_points or points_101, got " +
                    std::string(name));
}

void EvalConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("IoU threshold must lie in (0, 1]");
  }
  if (fppi_thresholds.empty()) throw ConfigError("FPPI threshold list is empty");
  for (std::size_t i = 0; i < fppi_thresholds.size(); ++i) {
    if (!(fppi_thresholds[i] > 0.0)) throw ConfigError("FPPI thresholds must be positive");
    if (i > 0 && !(fppi_thresholds[i] > fppi_thresholds[i - 1])) {
      throw ConfigError("FPPI thresholds must be strictly increasing");
    }
  }
}

namespace {

std::size_t total_gt(std::span<const MatchResult> matches) {
  std::size_t n = 0;
  for (const auto& m : matches) n += m.n_gt;
  return n;
}

}  // namespace

std::vector<RankedOutcome> rank_predictions(std::span<const MatchResult> matches) {
  std::vector<RankedOutcome> ranked;
  for (const auto& m : matches) {
    for (const auto& p : m.predictions) {
      if (p.outcome == MatchOutcome::kIgnored) continue;
      ranked.push_back({p.score, p.outcome == MatchOutcome::kTruePositive});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedOutcome& a, const RankedOutcome& b) {
                     return a.score > b.score;
                   });
  return ranked;
}

PRCurve pr_curve(std::span<const MatchResult> matches) {
  const std::size_t n_gt = total_gt(matches);
  if (n_gt == 0) throw NoGroundTruthError("no non-ignored ground truth for this class");
  const auto ranked = rank_predictions(matches);
  return pr_curve_from_ranked(ranked, n_gt);
}

PRCurve pr_curve_from_ranked(std::span<const RankedOutcome> ranked, std::size_t n_gt) {
  if (n_gt == 0) throw NoGroundTruthError("no non-ignored ground truth for this class");
  PRCurve curve;
  curve.n_gt = n_gt;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < ranked.size();) {
    const double cutoff = ranked[k].score;
    for (; k < ranked.size() && ranked[k].score == cutoff; ++k) {
      if (ranked[k].true_positive) ++tp;
    }
    curve.points.push_back({cutoff, static_cast<double>(tp) / static_cast<double>(n_gt),
                            static_cast<double>(tp) / static_cast<double>(k)});
  }
  return curve;
}

double average_precision(const PRCurve& curve, ApInterpolation mode) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;
  std::vector<double> envelope(pts.size());
  envelope.back() = pts.back().precision;
  for (std::size_t k = pts.size() - 1; k-- > 0;) {
    envelope[k] = std::max(pts[k].precision, envelope[k + 1]);
  }

  if (mode == ApInterpolation::kAllPoints) {
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k].recall > prev_recall) {
        ap += (pts[k].recall - prev_recall) * envelope[k];
        prev_recall = pts[k].recall;
      }
    }
    return ap;
  }

  double sum = 0.0;
  std::size_t k = 0;
  for (int i = 0; i <= 100; ++i) {
    const double r = static_cast<double>(i) / 100.0;
    while (k < pts.size() && pts[k].recall < r) ++k;
    if (k == pts.size()) break;
    sum += envelope[k];
  }
  return sum / 101.0;
}

double mean_average_precision(std::span<const double> per_class) {
  if (per_class.empty()) throw NoGroundTruthError("no class has ground truth");
  double sum = 0.0;
  for (double ap : per_class) sum += ap;
  return sum / static_cast<double>(per_class.size());
}

FrocResult froc(std::span<const MatchResult> matches, std::size_t n_images,
                std::span<const double> thresholds) {
  const auto ranked = rank_predictions(matches);
  return froc_from_ranked(ranked, total_gt(matches), n_images, thresholds);
}

FrocResult froc_from_ranked(std::span<const RankedOutcome> ranked, std::size_t n_gt,
                            std::size_t n_images, std::span<const double> thresholds) {
  if (n_images == 0) throw ValidationError("FROC needs at least one image");
  if (n_gt == 0) throw NoGroundTruthError("no non-ignored ground truth for this class");

  FrocResult result;
  result.sensitivities.assign(thresholds.size(), 0.0);
  auto record = [&](std::size_t tp, std::size_t fp) {
    const double fppi = static_cast<double>(fp) / static_cast<double>(n_images);
    const double sens = static_cast<double>(tp) / static_cast<double>(n_gt);
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (fppi <= thresholds[t]) {
        result.sensitivities[t] = std::max(result.sensitivities[t], sens);
      }
    }
  };

  std::size_t tp = 0;
  std::size_t fp = 0;
  record(0, 0);
  for (std::size_t k = 0; k < ranked.size();) {
    const double cutoff = ranked[k].score;
    for (; k < ranked.size() && ranked[k].score == cutoff; ++k) {
      ranked[k].true_positive ? ++tp : ++fp;
    }
    record(tp, fp);
  }

  double sum = 0.0;
  for (double s : result.sensitivities) sum += s;
  result.score = thresholds.empty() ? 0.0 : sum / static_cast<double>(thresholds.size());
  return result;
}

}  // namespace voxeval

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
#include "voxeval/evaluation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "voxeval/error.hpp"
#include "voxeval/parallel.hpp"

namespace voxeval {

Dataset::Dataset(std::vector<std::string> image_ids,
                 std::vector<std::vector<GroundTruthObject>> ground_truth)
    : image_ids_(std::move(image_ids)), ground_truth_(std::move(ground_truth)) {
  if (ground_truth_.size() != image_ids_.size()) {
    throw ValidationError("dataset: ground truth list does not match image list");
  }
  for (std::size_t i = 0; i < image_ids_.size(); ++i) {
    if (!index_.emplace(image_ids_[i], i).second) {
      throw ValidationError("dataset: duplicate image_id " + image_ids_[i]);
    }
    for (const auto& gt : ground_truth_[i]) {
      if (gt.image_id != image_ids_[i]) {
        throw ValidationError("dataset: ground truth for " + gt.image_id +
                              " stored under image " + image_ids_[i]);
      }
    }
  }
}

std::size_t Dataset::index_of(const std::string& image_id) const {
  const auto it = index_.find(image_id);
  if (it == index_.end()) throw ValidationError("unknown image_id " + image_id);
  return it->second;
}

std::vector<int> Dataset::class_ids() const {
  std::set<int> ids;
  for (const auto& gts : ground_truth_) {
    for (const auto& gt : gts) ids.insert(gt.class_id);
  }
  return {ids.begin(), ids.end()};
}

std::size_t Dataset::object_count() const {
  std::size_t n = 0;
  for (const auto& gts : ground_truth_) n += gts.size();
  return n;
}

MatchTable match_dataset(const Dataset& dataset, std::span<const Detection> detections,
                         const MatchSettings& settings, std::size_t threads,
                         std::span<const int> extra_classes) {
  settings.criterion.validate();

  std::set<int> classes(extra_classes.begin(), extra_classes.end());
  for (int c : dataset.class_ids()) classes.insert(c);
  for (const auto& d : detections) classes.insert(d.class_id);

  MatchTable table;
  table.class_ids.assign(classes.begin(), classes.end());
  table.n_images = dataset.size();
  std::map<int, std::size_t> class_slot;
  for (std::size_t c = 0; c < table.class_ids.size(); ++c) class_slot[table.class_ids[c]] = c;

  // Bucket detections by (class, image), keeping input order.
  const std::size_t n_classes = table.class_ids.size();
  std::vector<std::vector<std::vector<Detection>>> preds(
      n_classes, std::vector<std::vector<Detection>>(dataset.size()));
  for (const auto& d : detections) {
    preds[class_slot[d.class_id]][dataset.index_of(d.image_id)].push_back(d);
  }

  table.results.assign(n_classes, std::vector<MatchResult>(dataset.size()));
  parallel_for(n_classes * dataset.size(), threads, [&](std::size_t job) {
    const std::size_t c = job / dataset.size();
    const std::size_t img = job % dataset.size();
    std::vector<GroundTruthObject> gts;
    for (const auto& gt : dataset.ground_truth(img)) {
      if (gt.class_id == table.class_ids[c]) gts.push_back(gt);
    }
    table.results[c][img] = match_image(preds[c][img], gts, settings.criterion,
                                        settings.duplicates);
  });
  return table;
}

EvaluationResult summarize(const MatchTable& table, const EvalConfig& config) {
  config.validate();
  EvaluationResult result;
  result.n_images = table.n_images;
  result.fppi_thresholds = config.fppi_thresholds;
  result.sensitivities.assign(config.fppi_thresholds.size(), 0.0);

  std::vector<double> aps;
  std::vector<double> frocs;
  for (std::size_t c = 0; c < table.class_ids.size(); ++c) {
    const auto& matches = table.results[c];
    ClassResult cr;
    cr.class_id = table.class_ids[c];
    for (const auto& m : matches) {
      cr.n_gt += m.n_gt;
      cr.n_predictions += m.n_tp + m.n_fp;
    }
    cr.has_ground_truth = cr.n_gt > 0;
    if (cr.has_ground_truth) {
      const auto ranked = rank_predictions(matches);
      cr.ap = average_precision(pr_curve_from_ranked(ranked, cr.n_gt), config.ap_interpolation);
      const FrocResult fr =
          froc_from_ranked(ranked, cr.n_gt, table.n_images, config.fppi_thresholds);
      cr.sensitivities = fr.sensitivities;
      cr.froc = fr.score;
      aps.push_back(cr.ap);
      frocs.push_back(cr.froc);
      for (std::size_t t = 0; t < fr.sensitivities.size(); ++t) {
        result.sensitivities[t] += fr.sensitivities[t];
      }
      result.n_gt += cr.n_gt;
    }
    result.classes.push_back(std::move(cr));
  }
  result.map = mean_average_precision(aps);
  result.froc = mean_average_precision(frocs);
  for (double& s : result.sensitivities) s /= static_cast<double>(aps.size());
  return result;
}

EvaluationResult evaluate(const Dataset& dataset, std::span<const Detection> detections,
                          const MatchSettings& settings, const EvalConfig& config,
                          std::size_t threads) {
  return summarize(match_dataset(dataset, detections, settings, threads), config);
}

}  // namespace voxeval

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
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "voxeval/error.hpp"
#include "voxeval/matching.hpp"

using namespace voxeval;

namespace {

Detection det(BoundingBox3D box, double score, int cls = 0, std::string img = "i") {
  return {std::move(img), cls, box, score};
}

BoundingBox3D cube(Vec3 c, double half) {
  return {{c[0] - half, c[1] - half, c[2] - half}, {c[0] + half, c[1] + half, c[2] + half}};
}

GroundTruthObject gt(BoundingBox3D box, std::optional<double> diameter = std::nullopt,
                     bool ignore = false) {
  return GroundTruthObject::from_box("i", 0, box, diameter, ignore);
}

}  // namespace

TEST_CASE("criterion validation and parsing") {
  CHECK_THROWS_AS(MatchCriterion::iou(0.0).validate(), ConfigError);
  CHECK_THROWS_AS(MatchCriterion::iou(1.5).validate(), ConfigError);
  CHECK_NOTHROW(MatchCriterion::iou(1.0).validate());
  CHECK_THROWS_AS(MatchCriterion::center_in_radius(0.0).validate(), ConfigError);
  CHECK(duplicate_policy_from_string("fp") == DuplicatePolicy::kFalsePositive);
  CHECK(duplicate_policy_from_string("ignore") == DuplicatePolicy::kIgnore);
  CHECK_THROWS_AS(duplicate_policy_from_string("drop"), ConfigError);
  CHECK_THROWS_AS(det({{0, 0, 0}, {1, 1, 1}}, 1.5).validate(), ValidationError);
}

TEST_CASE("single prediction above the IoU threshold is a true positive") {
  const std::vector<GroundTruthObject> gts{gt({{0, 0, 0}, {2, 2, 2}})};
  const std::vector<Detection> preds{det({{0, 0, 0}, {2, 2, 1}}, 0.7)};  // IoU 0.5
  const auto r = match_image(preds, gts, MatchCriterion::iou(0.1));
  CHECK(r.n_tp == 1);
  CHECK(r.n_fp == 0);
  CHECK(r.predictions[0].outcome == MatchOutcome::kTruePositive);
  CHECK(r.predictions[0].gt_index == 0u);
  CHECK(r.gt_hit[0]);
}

TEST_CASE("half-diameter criterion") {
  const std::vector<GroundTruthObject> gts{gt(cube({0, 0, 0}, 5), 10.0)};
  const std::vector<Detection> near{det(cube({0, 0, 4}, 1), 0.9)};
  const std::vector<Detection> far{det(cube({0, 0, 6}, 1), 0.9)};
  CHECK(match_image(near, gts, MatchCriterion::center_half_diameter()).n_tp == 1);
  CHECK(match_image(far, gts, MatchCriterion::center_half_diameter()).n_fp == 1);
  CHECK(match_image(far, gts, MatchCriterion::center_in_radius(6.5)).n_tp == 1);
  CHECK(match_image(far, gts, MatchCriterion::center_in_radius()).n_fp == 1);
}

TEST_CASE("duplicate policy") {
  const std::vector<GroundTruthObject> gts{gt({{0, 0, 0}, {2, 2, 2}})};
  const std::vector<Detection> preds{det({{0, 0, 0}, {2, 2, 2}}, 0.8),
                                     det({{0, 0, 0}, {2, 2, 1.9}}, 0.9)};
  const auto fp = match_image(preds, gts, MatchCriterion::iou(0.1), DuplicatePolicy::kFalsePositive);
  CHECK(fp.n_tp == 1);
  CHECK(fp.n_fp == 1);
  CHECK(fp.predictions[1].outcome == MatchOutcome::kTruePositive);  // the 0.9 prediction
  CHECK(fp.predictions[0].outcome == MatchOutcome::kFalsePositive);
  const auto ig = match_image(preds, gts, MatchCriterion::iou(0.1), DuplicatePolicy::kIgnore);
  CHECK(ig.n_tp == 1);
  CHECK(ig.n_fp == 0);
  CHECK(ig.n_ignored == 1);
  CHECK(ig.predictions[0].outcome == MatchOutcome::kIgnored);
}

TEST_CASE("ignored ground truth absorbs predictions") {
  const std::vector<GroundTruthObject> gts{gt({{0, 0, 0}, {2, 2, 2}}, std::nullopt, true),
                                           gt({{10, 10, 10}, {12, 12, 12}})};
  const std::vector<Detection> preds{det({{0, 0, 0}, {2, 2, 2}}, 0.9),
                                     det({{10, 10, 10}, {12, 12, 12}}, 0.5),
                                     det({{50, 50, 50}, {52, 52, 52}}, 0.4)};
  const auto r = match_image(preds, gts, MatchCriterion::iou(0.1));
  CHECK(r.n_gt == 1);
  CHECK(r.n_tp == 1);
  CHECK(r.n_fp == 1);
  CHECK(r.n_ignored == 1);
  CHECK(r.predictions[0].outcome == MatchOutcome::kIgnored);
  CHECK(r.predictions[0].gt_index == 0u);
}

TEST_CASE("the best unmatched ground truth wins, lowest index on ties") {
  const std::vector<GroundTruthObject> gts{gt({{0, 0, 0}, {4, 4, 4}}), gt({{0, 0, 0}, {2, 2, 2}}),
                                           gt({{0, 0, 0}, {2, 2, 2}})};
  const std::vector<Detection> preds{det({{0, 0, 0}, {2, 2, 2}}, 0.9),
                                     det({{0, 0, 0}, {2, 2, 2}}, 0.8),
                                     det({{0, 0, 0}, {2, 2, 2}}, 0.7)};
  const auto r = match_image(preds, gts, MatchCriterion::iou(0.1));
  CHECK(r.predictions[0].gt_index == 1u);
  CHECK(r.predictions[1].gt_index == 2u);
  CHECK(r.predictions[2].gt_index == 0u);
}

TEST_CASE("mixed ids are rejected") {
  const std::vector<GroundTruthObject> gts{gt({{0, 0, 0}, {1, 1, 1}})};
  const std::vector<Detection> other_img{det({{0, 0, 0}, {1, 1, 1}}, 0.5, 0, "j")};
  const std::vector<Detection> other_cls{det({{0, 0, 0}, {1, 1, 1}}, 0.5, 1)};
  CHECK_THROWS_AS(match_image(other_img, gts, MatchCriterion::iou(0.1)), ValidationError);
  CHECK_THROWS_AS(match_image(other_cls, gts, MatchCriterion::iou(0.1)), ValidationError);
}

TEST_CASE("greedy matching equals the assignment enumeration oracle") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0, 6);
  std::uniform_real_distribution<double> len(1, 4);
  auto rbox = [&] {
    const Vec3 lo{pos(rng), pos(rng), pos(rng)};
    const double a = len(rng), b = len(rng), c = len(rng);
    return BoundingBox3D{lo, {lo[0] + a, lo[1] + b, lo[2] + c}};
  };
  const std::vector<MatchCriterion> criteria{MatchCriterion::iou(0.1), MatchCriterion::iou(0.3),
                                             MatchCriterion::center_half_diameter(),
                                             MatchCriterion::center_in_radius(2.0)};
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<Detection> preds(1 + rng() % 5);
    std::vector<GroundTruthObject> gts(rng() % 4);
    for (auto& g : gts) g = gt(rbox());
    for (auto& p : preds) p = det(rbox(), double(rng() % 5) / 4.0);  // ties are common
    for (const auto& c : criteria) {
      const auto expected = oracle::enumerate_assignment(preds, gts, c);
      const auto got = match_image(preds, gts, c);
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (expected[i]) {
          CHECK(got.predictions[i].outcome == MatchOutcome::kTruePositive);
          CHECK(got.predictions[i].gt_index == expected[i]);
        } else {
          CHECK(got.predictions[i].outcome == MatchOutcome::kFalsePositive);
        }
      }
      CHECK(got.n_tp + got.n_fp + got.n_ignored == preds.size());
      CHECK(got.n_tp <= got.n_gt);
      ++checked;
    }
  }
  CHECK(checked == 1600);
}

TEST_CASE("matching properties") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pos(0, 10);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  auto rbox = [&] {
    const Vec3 lo{pos(rng), pos(rng), pos(rng)};
    return BoundingBox3D{lo, {lo[0] + 3, lo[1] + 3, lo[2] + 3}};
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GroundTruthObject> gts(1 + rng() % 4);
    for (auto& g : gts) g = gt(rbox());
    std::vector<Detection> preds(1 + rng() % 6);
    for (auto& p : preds) p = det(rbox(), unit(rng));
    const auto c = MatchCriterion::iou(0.1);
    const auto base = match_image(preds, gts, c);

    // A pure false positive never decreases n_tp.
    auto more = preds;
    more.push_back(det({{100, 100, 100}, {101, 101, 101}}, unit(rng)));
    CHECK(match_image(more, gts, c).n_tp >= base.n_tp);

    // Strictly monotone score transforms keep the TP set.
    auto squashed = preds;
    for (auto& p : squashed) p.score = p.score * p.score * 0.5;
    const auto t = match_image(squashed, gts, c);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      CHECK(t.predictions[i].outcome == base.predictions[i].outcome);
    }

    // Under the ignore policy only predictions qualifying against nothing
    // are false positives.
    const auto ig = match_image(preds, gts, c, DuplicatePolicy::kIgnore);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      bool qualifies = false;
      for (const auto& g : gts) qualifies = qualifies || box_iou(preds[i].box, g.box) >= 0.1;
      CHECK((ig.predictions[i].outcome == MatchOutcome::kFalsePositive) == !qualifies);
    }
  }
}

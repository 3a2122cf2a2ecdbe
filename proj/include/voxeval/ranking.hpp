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

#ifndef VOXEVAL_RANKING_HPP_
#define VOXEVAL_RANKING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxeval/evaluation.hpp"

namespace voxeval {

inline constexpr std::size_t kDefaultBootstrapIterations = 1000;

enum class RankMetric { kMap, kFroc };
enum class TieMode { kFractional, kMin };

std::string_view to_string(RankMetric metric);
RankMetric rank_metric_from_string(std::string_view name);
std::string_view to_string(TieMode mode);
TieMode tie_mode_from_string(std::string_view name);

struct MethodRun {
  std::string method_id;
  std::vector<Detection> detections;
  // Images the method produced output for. When unset, the images that carry
  // at least one detection.
  std::optional<std::vector<std::string>> covered_images;
};

// Universe images the run does not cover; these count as empty predictions.
std::vector<std::string> missing_images(const Dataset& dataset, const MethodRun& run);

struct BootstrapConfig {
  RankMetric metric = RankMetric::kMap;
  std::size_t iterations = kDefaultBootstrapIterations;
  std::uint64_t seed = 0;
  TieMode ties = TieMode::kFractional;
  std::size_t threads = 0;
};

struct MethodRanking {
  std::string method_id;
  // histogram[r] is the (possibly fractional) number of iterations the method
  // held rank r + 1. A k-way tie spreads 1/k over each tied rank.
  std::vector<double> histogram;
  double mean_rank = 0.0;
  double map = 0.0;   // full dataset
  double froc = 0.0;  // full dataset
};

struct RankingDistribution {
  std::vector<MethodRanking> methods;  // input order
  RankMetric metric = RankMetric::kMap;
  TieMode ties = TieMode::kFractional;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::size_t n_images = 0;
  std::vector<std::string> warnings;
};

// Per-iteration RNG seed derived from (seed, iteration) alone.
std::uint64_t iteration_seed(std::uint64_t seed, std::size_t iteration);

// The N image indices drawn with replacement for one iteration. Every method
// is scored on this same draw.
std::vector<std::size_t> bootstrap_draw(std::uint64_t seed, std::size_t iteration,
                                        std::size_t n_images);

// Ranks by descending metric. kFractional gives tied entries the average of
// the ranks they span; kMin gives them the best of those ranks.
std::vector<double> assign_ranks(std::span<const double> metrics, TieMode mode);

// Paired image-level bootstrap: each iteration draws N images with
// replacement, scores every method on the drawn multiset (a duplicated image
// counts as a distinct image) and ranks the methods. A draw without any
// ground truth scores every method 0. Output is independent of the thread
// count. Throws ValidationError for an empty universe or fewer than two
// methods.
RankingDistribution bootstrap_rank(const Dataset& dataset, std::span<const MethodRun> runs,
                                   const MatchSettings& settings, const EvalConfig& config,
                                   const BootstrapConfig& bootstrap);

// Scores every method on one weighted image multiset (weights[i] copies of
// image i). Exposed for testing the pairing contract.
std::vector<double> score_resample(const Dataset& dataset, std::span<const MethodRun> runs,
                                   const MatchSettings& settings, const EvalConfig& config,
                                   RankMetric metric, std::span<const std::size_t> weights);

// metric - baseline metric for every method. Throws ValidationError when the
// baseline is unknown.
std::map<std::string, double> delta_vs_baseline(const std::map<std::string, double>& metrics,
                                                const std::string& baseline_id);

}  // namespace voxeval

#endif  // VOXEVAL_RANKING_HPP_

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

#ifndef VOXEVAL_COMMANDS_HPP_
#define VOXEVAL_COMMANDS_HPP_

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "voxeval/evaluation.hpp"
#include "voxeval/manifest.hpp"
#include "voxeval/postprocessing.hpp"
#include "voxeval/preprocessing.hpp"
#include "voxeval/ranking.hpp"

namespace voxeval {

enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kValidation = 3,
  kIo = 4,
};

int exit_code_for(const std::exception& e);

// Official evaluation protocols.
//   luna16: center within half the reference diameter, duplicates ignored
//   pn9:    center within the reference radius, duplicates ignored
//   ctaa:   IoU >= 0.3, duplicates ignored
enum class Official { kLuna16, kPn9, kCtaa };

Official official_from_string(std::string_view name);
std::string_view to_string(Official official);
CriterionKind criterion_from_string(std::string_view name);
std::string_view to_string(CriterionKind kind);

struct RunConfig {
  std::filesystem::path manifest;
  std::vector<std::pair<std::string, std::filesystem::path>> predictions;
  std::string baseline;  // defaults to the first method

  EvalConfig eval;
  PostprocessConfig postprocess;
  PreprocessConfig preprocess;

  CriterionKind criterion = CriterionKind::kIouThreshold;
  std::optional<double> radius;  // explicit radius for center_in_radius
  DuplicatePolicy duplicates = DuplicatePolicy::kFalsePositive;
  std::optional<Official> official;

  std::uint64_t seed = 0;
  std::size_t iterations = kDefaultBootstrapIterations;
  RankMetric rank_metric = RankMetric::kMap;
  TieMode ties = TieMode::kFractional;

  std::optional<Split> split;
  Strictness unknown_images = Strictness::kFail;
  std::filesystem::path out = "voxeval_out";
  std::size_t threads = 0;  // 0 = auto
  std::vector<std::filesystem::path> report_inputs;

  // Criterion and duplicate policy after applying the official preset.
  MatchSettings match_settings() const;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

// Applies a preset's criterion, duplicate policy and IoU threshold.
void apply_official(RunConfig& config, Official official);

// Overrides fields of `config` with those present in a JSON config document.
// Unknown keys are a ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& doc);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

// Table cell: value * 100 with two decimals.
std::string format_points(double value);

// Resamples and normalizes every manifest image and mask; writes NIfTI files,
// a manifest pointing at them and preprocess.json.
void cmd_preprocess(const RunConfig& config);

// Writes ground_truth.json: the manifest with mask annotations converted to
// explicit boxes.
void cmd_extract(const RunConfig& config);

struct MethodEvaluation {
  std::string method_id;
  EvaluationResult result;
  std::vector<std::string> warnings;
};

// postprocess -> match -> metrics per method; writes evaluation.json and
// table.csv.
std::vector<MethodEvaluation> cmd_evaluate(const RunConfig& config);

// Bootstrap ranking; writes ranking.json and rank_histogram.csv.
RankingDistribution cmd_rank(const RunConfig& config);

// Merges evaluation.json files into report.csv (methods x datasets).
void cmd_report(const RunConfig& config);

}  // namespace voxeval

#endif  // VOXEVAL_COMMANDS_HPP_

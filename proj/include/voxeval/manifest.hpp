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

#ifndef VOXEVAL_MANIFEST_HPP_
#define VOXEVAL_MANIFEST_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "voxeval/evaluation.hpp"
#include "voxeval/geometry.hpp"
#include "voxeval/labeling.hpp"
#include "voxeval/matching.hpp"

namespace voxeval {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kPredictionSchemaVersion = 1;

enum class Split { kTrain, kVal, kTest };

std::string_view to_string(Split split);
Split split_from_string(std::string_view name);

struct MaskSource {
  std::filesystem::path path;
  std::map<int, int> class_of_label;  // mask value -> class id
};

struct ManifestImage {
  std::string image_id;
  Split split = Split::kTest;
  std::optional<std::filesystem::path> image_path;
  std::optional<MaskSource> mask;
  std::vector<GroundTruthObject> boxes;  // explicit annotations, x/y/z order
};

// Manifest document:
//
//   {
//     "schema_version": 1,
//     "dataset_id": "D06",
//     "classes": {"0": "nodule"},
//     "axis_order": "zyx",              // order of every triple in the file
//     "median_spacing": [1.25, 0.7, 0.7],  // optional
//     "connectivity": 26,               // optional, for mask sources
//     "images": [
//       {"image_id": "case_0", "split": "test", "image": "img/case_0.nii.gz",
//        "mask": {"path": "seg/case_0.nii.gz", "labels": {"1": 0}},
//        "boxes": [{"class_id": 0, "min": [..], "max": [..],
//                   "diameter": 6.0, "ignore": false}]}
//     ]
//   }
//
// Relative paths resolve against the manifest's directory. Triples are stored
// internally in x/y/z order.
class DatasetManifest {
 public:
  std::string dataset_id;
  std::map<int, std::string> classes;
  std::string axis_order = "xyz";
  std::optional<Vec3> median_spacing;
  Connectivity connectivity = kDefaultConnectivity;
  std::vector<ManifestImage> images;

  // Explicit boxes plus, for mask sources, the extracted instances. Masks are
  // read and labeled once on first access; safe to call concurrently.
  const std::vector<GroundTruthObject>& ground_truth(std::size_t image) const;

  std::size_t index_of(const std::string& image_id) const;

  // Images of `split` (all when unset) in manifest order.
  Dataset to_dataset(std::optional<Split> split = std::nullopt, std::size_t threads = 1) const;

  // Resets the ground-truth cache; call after editing `images`.
  void reset_cache();

 private:
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Throws ValidationError with a field path on schema violations, duplicate ids
// or unresolved paths, and IoError when the document cannot be read.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const nlohmann::json& doc,
                               const std::filesystem::path& base_dir);

// Serializes with x/y/z triples and absolute paths.
nlohmann::json manifest_to_json(const DatasetManifest& manifest);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct PredictionFile {
  std::string method_id;
  std::vector<Detection> detections;
  std::optional<std::vector<std::string>> image_ids;  // covered images, if declared
};

// Prediction documents are either a JSON object
//
//   {"schema_version": 1, "method_id": "mae", "image_ids": [...],
//    "detections": [{"image_id": "case_0", "class_id": 0,
//                    "min": [x, y, z], "max": [x, y, z], "score": 0.93}]}
//
// or newline-delimited records, one detection object per line, optionally
// preceded by a header line without "image_id". Coordinates are millimeters
// in x/y/z order.
PredictionFile load_predictions(const std::filesystem::path& path);
PredictionFile parse_predictions(const nlohmann::json& doc);
PredictionFile parse_prediction_lines(std::string_view text);

nlohmann::json predictions_to_json(const PredictionFile& file);
void write_predictions(const PredictionFile& file, const std::filesystem::path& path);

enum class Strictness { kFail, kWarn };

// Unknown image ids either throw (kFail) or are dropped with a warning (kWarn).
void check_prediction_images(PredictionFile& file, const Dataset& dataset,
                             Strictness strictness, std::vector<std::string>* warnings);

}  // namespace voxeval

#endif  // VOXEVAL_MANIFEST_HPP_

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
#include "voxeval/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "voxeval/error.hpp"
#include "voxeval/nifti.hpp"
#include "voxeval/parallel.hpp"

namespace voxeval {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "test";
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ValidationError("split must be train, val or test, got " + std::string(name));
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + "." + key, "missing required field");
  return *it;
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

int get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

Vec3 get_triple(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) fail(where, "expected an array of 3 numbers");
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = get_number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

int parse_int_key(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(key, &used);
    if (used == key.size()) return value;
  } catch (const std::exception&) {
  }
  fail(where, "key \"" + key + "\" is not an integer");
}

// Maps a triple given in `order` (a permutation of "xyz") onto x/y/z.
Vec3 to_xyz(const Vec3& t, const std::string& order) {
  Vec3 out{};
  for (int k = 0; k < 3; ++k) out[order[k] - 'x'] = t[k];
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

json triple_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Detection parse_detection(const json& rec, const std::string& where) {
  Detection d;
  d.image_id = get_string(require(rec, "image_id", where), where + ".image_id");
  d.class_id = get_int(require(rec, "class_id", where), where + ".class_id");
  d.box.min = get_triple(require(rec, "min", where), where + ".min");
  d.box.max = get_triple(require(rec, "max", where), where + ".max");
  d.score = get_number(require(rec, "score", where), where + ".score");
  if (!d.box.valid()) fail(where, "box needs min < max on every axis");
  if (!(d.score >= 0.0 && d.score <= 1.0)) {
    std::ostringstream os;
    os << "score " << d.score << " outside [0, 1]";
    fail(where + ".score", os.str());
  }
  return d;
}

void check_schema_version(const json& doc, int expected, const std::string& where) {
  const auto it = doc.find("schema_version");
  if (it == doc.end()) return;
  if (get_int(*it, where + ".schema_version") != expected) {
    fail(where + ".schema_version", "unsupported version " + it->dump());
  }
}

}  // namespace

struct DatasetManifest::Cache {
  explicit Cache(std::size_t n) : objects(n), once(new std::once_flag[n]) {}
  std::vector<std::vector<GroundTruthObject>> objects;
  std::unique_ptr<std::once_flag[]> once;
};

void DatasetManifest::reset_cache() { cache_ = std::make_shared<Cache>(images.size()); }

const std::vector<GroundTruthObject>& DatasetManifest::ground_truth(std::size_t image) const {
  if (!cache_ || image >= cache_->objects.size()) {
    throw ValidationError("manifest ground-truth cache is stale; call reset_cache()");
  }
  std::call_once(cache_->once[image], [&] {
    const ManifestImage& entry = images[image];
    std::vector<GroundTruthObject> objects = entry.boxes;
    if (entry.mask) {
      const Volume mask = read_volume(entry.mask->path);
      auto extracted =
          extract_objects(mask, entry.mask->class_of_label, entry.image_id, connectivity);
      objects.insert(objects.end(), extracted.begin(), extracted.end());
    }
    cache_->objects[image] = std::move(objects);
  });
  return cache_->objects[image];
}

std::size_t DatasetManifest::index_of(const std::string& image_id) const {
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].image_id == image_id) return i;
  }
  throw ValidationError("unknown image_id " + image_id);
}

Dataset DatasetManifest::to_dataset(std::optional<Split> split, std::size_t threads) const {
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!split || images[i].split == *split) selected.push_back(i);
  }
  parallel_for(selected.size(), threads, [&](std::size_t k) { ground_truth(selected[k]); });
  std::vector<std::string> ids;
  std::vector<std::vector<GroundTruthObject>> gts;
  for (std::size_t i : selected) {
    ids.push_back(images[i].image_id);
    gts.push_back(ground_truth(i));
  }
  return Dataset(std::move(ids), std::move(gts));
}

DatasetManifest parse_manifest(const json& doc, const fs::path& base_dir) {
  const std::string root = "manifest";
  if (!doc.is_object()) fail(root, "expected a JSON object");
  check_schema_version(doc, kManifestSchemaVersion, root);

  DatasetManifest m;
  m.dataset_id = get_string(require(doc, "dataset_id", root), root + ".dataset_id");

  const json& classes = require(doc, "classes", root);
  if (!classes.is_object() || classes.empty()) {
    fail(root + ".classes", "expected a non-empty object of id -> name");
  }
  for (const auto& [key, name] : classes.items()) {
    const std::string where = root + ".classes." + key;
    m.classes[parse_int_key(key, where)] = get_string(name, where);
  }

  if (const auto it = doc.find("axis_order"); it != doc.end()) {
    m.axis_order = get_string(*it, root + ".axis_order");
    std::string sorted = m.axis_order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != "xyz") fail(root + ".axis_order", "expected a permutation of \"xyz\"");
  }
  if (const auto it = doc.find("median_spacing"); it != doc.end()) {
    m.median_spacing = to_xyz(get_triple(*it, root + ".median_spacing"), m.axis_order);
  }
  if (const auto it = doc.find("connectivity"); it != doc.end()) {
    try {
      m.connectivity = connectivity_from_int(get_int(*it, root + ".connectivity"));
    } catch (const ConfigError& e) {
      fail(root + ".connectivity", e.what());
    }
  }

  const json& images = require(doc, "images", root);
  if (!images.is_array()) fail(root + ".images", "expected an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = root + ".images[" + std::to_string(i) + "]";
    const json& img = images[i];
    ManifestImage entry;
    entry.image_id = get_string(require(img, "image_id", where), where + ".image_id");
    if (entry.image_id.empty()) fail(where + ".image_id", "must not be empty");
    if (!seen.insert(entry.image_id).second) {
      fail(where + ".image_id", "duplicate image_id \"" + entry.image_id + "\"");
    }
    const std::string split = get_string(require(img, "split", where), where + ".split");
    try {
      entry.split = split_from_string(split);
    } catch (const ValidationError& e) {
      fail(where + ".split", e.what());
    }

    if (const auto it = img.find("image"); it != img.end()) {
      entry.image_path = resolve(base_dir, get_string(*it, where + ".image"));
      if (!fs::exists(*entry.image_path)) {
        fail(where + ".image", "dangling path " + entry.image_path->string());
      }
    }
    if (const auto it = img.find("mask"); it != img.end()) {
      const std::string mw = where + ".mask";
      MaskSource mask;
      mask.path = resolve(base_dir, get_string(require(*it, "path", mw), mw + ".path"));
      if (!fs::exists(mask.path)) fail(mw + ".path", "dangling path " + mask.path.string());
      const json& labels = require(*it, "labels", mw);
      if (!labels.is_object() || labels.empty()) {
        fail(mw + ".labels", "expected a non-empty object of mask value -> class id");
      }
      for (const auto& [key, cls] : labels.items()) {
        const std::string lw = mw + ".labels." + key;
        const int value = parse_int_key(key, lw);
        if (value == 0) fail(lw, "mask value 0 is background");
        const int class_id = get_int(cls, lw);
        if (!m.classes.contains(class_id)) fail(lw, "class " + std::to_string(class_id) + " not declared");
        mask.class_of_label[value] = class_id;
      }
      entry.mask = std::move(mask);
    }
    if (const auto it = img.find("boxes"); it != img.end()) {
      if (!it->is_array()) fail(where + ".boxes", "expected an array");
      for (std::size_t b = 0; b < it->size(); ++b) {
        const std::string bw = where + ".boxes[" + std::to_string(b) + "]";
        const json& rec = (*it)[b];
        const int class_id = get_int(require(rec, "class_id", bw), bw + ".class_id");
        if (!m.classes.contains(class_id)) {
          fail(bw + ".class_id", "class " + std::to_string(class_id) + " not declared");
        }
        BoundingBox3D box;
        box.min = to_xyz(get_triple(require(rec, "min", bw), bw + ".min"), m.axis_order);
        box.max = to_xyz(get_triple(require(rec, "max", bw), bw + ".max"), m.axis_order);
        if (!box.valid()) fail(bw, "box needs min < max on every axis");
        std::optional<double> diameter;
        if (const auto d = rec.find("diameter"); d != rec.end() && !d->is_null()) {
          diameter = get_number(*d, bw + ".diameter");
          if (!(*diameter > 0.0)) fail(bw + ".diameter", "must be positive");
        }
        bool ignore = false;
        if (const auto ig = rec.find("ignore"); ig != rec.end()) {
          if (!ig->is_boolean()) fail(bw + ".ignore", "expected a boolean");
          ignore = ig->get<bool>();
        }
        auto gt = GroundTruthObject::from_box(entry.image_id, class_id, box, diameter, ignore);
        if (const auto c = rec.find("center"); c != rec.end()) {
          gt.center = to_xyz(get_triple(*c, bw + ".center"), m.axis_order);
        }
        entry.boxes.push_back(std::move(gt));
      }
    }
    m.images.push_back(std::move(entry));
  }
  m.reset_cache();
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read manifest " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError("manifest " + path.string() + ": malformed JSON: " + e.what());
  }
  return parse_manifest(doc, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

json manifest_to_json(const DatasetManifest& manifest) {
  json doc;
  doc["schema_version"] = kManifestSchemaVersion;
  doc["dataset_id"] = manifest.dataset_id;
  json classes = json::object();
  for (const auto& [id, name] : manifest.classes) classes[std::to_string(id)] = name;
  doc["classes"] = classes;
  doc["axis_order"] = "xyz";
  if (manifest.median_spacing) doc["median_spacing"] = triple_json(*manifest.median_spacing);
  doc["connectivity"] = static_cast<int>(manifest.connectivity);
  json images = json::array();
  for (const auto& img : manifest.images) {
    json entry;
    entry["image_id"] = img.image_id;
    entry["split"] = std::string(to_string(img.split));
    if (img.image_path) entry["image"] = fs::absolute(*img.image_path).lexically_normal().string();
    if (img.mask) {
      json labels = json::object();
      for (const auto& [value, cls] : img.mask->class_of_label) labels[std::to_string(value)] = cls;
      entry["mask"] = {{"path", fs::absolute(img.mask->path).lexically_normal().string()},
                       {"labels", labels}};
    }
    json boxes = json::array();
    for (const auto& gt : img.boxes) {
      json b;
      b["class_id"] = gt.class_id;
      b["min"] = triple_json(gt.box.min);
      b["max"] = triple_json(gt.box.max);
      b["center"] = triple_json(gt.center);
      if (gt.diameter) b["diameter"] = *gt.diameter;
      b["ignore"] = gt.ignore;
      boxes.push_back(std::move(b));
    }
    entry["boxes"] = std::move(boxes);
    images.push_back(std::move(entry));
  }
  doc["images"] = std::move(images);
  return doc;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << manifest_to_json(manifest).dump(2) << "\n";
  if (!os) throw IoError("write failed: " + path.string());
}

PredictionFile parse_predictions(const json& doc) {
  const std::string root = "predictions";
  if (!doc.is_object()) fail(root, "expected a JSON object");
  check_schema_version(doc, kPredictionSchemaVersion, root);
  PredictionFile file;
  if (const auto it = doc.find("method_id"); it != doc.end()) {
    file.method_id = get_string(*it, root + ".method_id");
  }
  if (const auto it = doc.find("image_ids"); it != doc.end()) {
    if (!it->is_array()) fail(root + ".image_ids", "expected an array of strings");
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < it->size(); ++i) {
      ids.push_back(get_string((*it)[i], root + ".image_ids[" + std::to_string(i) + "]"));
    }
    file.image_ids = std::move(ids);
  }
  const json& dets = require(doc, "detections", root);
  if (!dets.is_array()) fail(root + ".detections", "expected an array");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    file.detections.push_back(
        parse_detection(dets[i], root + ".detections[" + std::to_string(i) + "]"));
  }
  return file;
}

PredictionFile parse_prediction_lines(std::string_view text) {
  PredictionFile file;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      if (end == text.size()) break;
      continue;
    }
    const std::string where = "predictions line " + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(where, std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) fail(where, "expected a JSON object");
    if (!rec.contains("image_id")) {
      check_schema_version(rec, kPredictionSchemaVersion, where);
      if (const auto it = rec.find("method_id"); it != rec.end()) {
        file.method_id = get_string(*it, where + ".method_id");
      }
      continue;
    }
    file.detections.push_back(parse_detection(rec, where));
    if (end == text.size()) break;
  }
  return file;
}

PredictionFile load_predictions(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read predictions " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") return parse_prediction_lines(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error&) {
    return parse_prediction_lines(text);
  }
  return parse_predictions(doc);
}

json predictions_to_json(const PredictionFile& file) {
  json doc;
  doc["schema_version"] = kPredictionSchemaVersion;
  doc["method_id"] = file.method_id;
  if (file.image_ids) doc["image_ids"] = *file.image_ids;
  json dets = json::array();
  for (const auto& d : file.detections) {
    dets.push_back({{"image_id", d.image_id},
                    {"class_id", d.class_id},
                    {"min", triple_json(d.box.min)},
                    {"max", triple_json(d.box.max)},
                    {"score", d.score}});
  }
  doc["detections"] = std::move(dets);
  return doc;
}

void write_predictions(const PredictionFile& file, const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << predictions_to_json(file).dump() << "\n";
  if (!os) throw IoError("write failed: " + path.string());
}

void check_prediction_images(PredictionFile& file, const Dataset& dataset,
                             Strictness strictness, std::vector<std::string>* warnings) {
  std::set<std::string> unknown;
  for (const auto& d : file.detections) {
    if (!dataset.contains(d.image_id)) unknown.insert(d.image_id);
  }
  if (unknown.empty()) return;
  if (strictness == Strictness::kFail) {
    throw ValidationError("predictions of " + file.method_id + " reference unknown image_id " +
                          *unknown.begin());
  }
  std::erase_if(file.detections,
                [&](const Detection& d) { return unknown.contains(d.image_id); });
  if (warnings != nullptr) {
    for (const auto& id : unknown) {
      warnings->push_back("predictions of " + file.method_id + ": dropped records for unknown image_id " + id);
    }
  }
}

}  // namespace voxeval

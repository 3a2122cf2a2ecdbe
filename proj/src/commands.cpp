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
#include "voxeval/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "voxeval/error.hpp"
#include "voxeval/nifti.hpp"
#include "voxeval/parallel.hpp"

namespace voxeval {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  if (const auto* nifti = dynamic_cast<const NiftiError*>(&e)) {
    return static_cast<int>(nifti->code() == NiftiErrc::kUnreadable ? ExitCode::kIo
                                                                    : ExitCode::kValidation);
  }
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return static_cast<int>(ExitCode::kConfig);
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) {
    return static_cast<int>(ExitCode::kValidation);
  }
  if (dynamic_cast<const IoError*>(&e) != nullptr ||
      dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) {
    return static_cast<int>(ExitCode::kIo);
  }
  return static_cast<int>(ExitCode::kInternal);
}

Official official_from_string(std::string_view name) {
  if (name == "luna16") return Official::kLuna16;
  if (name == "pn9") return Official::kPn9;
  if (name == "ctaa") return Official::kCtaa;
  throw ConfigError("official preset must be luna16, pn9 or ctaa, got " + std::string(name));
}

std::string_view to_string(Official official) {
  switch (official) {
    case Official::kLuna16: return "luna16";
    case Official::kPn9: return "pn9";
    case Official::kCtaa: return "ctaa";
  }
  return "luna16";
}

CriterionKind criterion_from_string(std::string_view name) {
  if (name == "iou") return CriterionKind::kIouThreshold;
  if (name == "center_half_diameter") return CriterionKind::kCenterHalfDiameter;
  if (name == "center_in_radius") return CriterionKind::kCenterInRadius;
  throw ConfigError(
      "criterion must be iou, center_half_diameter or center_in_radius, got " +
      std::string(name));
}

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kIouThreshold: return "iou";
    case CriterionKind::kCenterHalfDiameter: return "center_half_diameter";
    case CriterionKind::kCenterInRadius: return "center_in_radius";
  }
  return "iou";
}

MatchSettings RunConfig::match_settings() const {
  MatchSettings s;
  s.duplicates = duplicates;
  switch (criterion) {
    case CriterionKind::kIouThreshold:
      s.criterion = MatchCriterion::iou(eval.iou_threshold);
      break;
    case CriterionKind::kCenterHalfDiameter:
      s.criterion = MatchCriterion::center_half_diameter();
      break;
    case CriterionKind::kCenterInRadius:
      s.criterion = radius ? MatchCriterion::center_in_radius(*radius)
                           : MatchCriterion::center_in_radius();
      break;
  }
  return s;
}

void RunConfig::validate() const {
  eval.validate();
  postprocess.validate();
  preprocess.validate();
  match_settings().criterion.validate();
  std::set<std::string> ids;
  for (const auto& [id, path] : predictions) {
    if (id.empty()) throw ConfigError("prediction entries need a method id (--pred id=path)");
    if (!ids.insert(id).second) throw ConfigError("duplicate method id " + id);
  }
  if (!baseline.empty() && !ids.contains(baseline)) {
    throw ConfigError("baseline " + baseline + " is not among the methods");
  }
}

void apply_official(RunConfig& config, Official official) {
  config.official = official;
  config.duplicates = DuplicatePolicy::kIgnore;
  switch (official) {
    case Official::kLuna16:
      config.criterion = CriterionKind::kCenterHalfDiameter;
      break;
    case Official::kPn9:
      config.criterion = CriterionKind::kCenterInRadius;
      config.radius.reset();
      break;
    case Official::kCtaa:
      config.criterion = CriterionKind::kIouThreshold;
      config.eval.iou_threshold = 0.3;
      break;
  }
}

namespace {

template <typename T>
T as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for " + key + ": " + v.dump());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
  if (!os) throw IoError("write failed: " + path.string());
}

void ensure_out_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw IoError("output directory " + out.string() + " is not writable");
  }
}

json triple(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json settings_json(const RunConfig& config) {
  const MatchSettings ms = config.match_settings();
  json s;
  s["criterion"] = std::string(to_string(config.criterion));
  s["criterion_detail"] = ms.criterion.describe();
  s["duplicate_policy"] = std::string(to_string(ms.duplicates));
  s["official"] = config.official ? json(std::string(to_string(*config.official))) : json(nullptr);
  s["iou_threshold"] = config.eval.iou_threshold;
  s["fppi_thresholds"] = config.eval.fppi_thresholds;
  s["ap_interpolation"] = std::string(to_string(config.eval.ap_interpolation));
  s["froc_aggregation"] = "per_class_mean";
  s["split"] = config.split ? json(std::string(to_string(*config.split))) : json("all");
  json pp;
  pp["min_score"] = config.postprocess.min_score;
  pp["nms_iou"] = config.postprocess.nms_iou;
  pp["max_detections_per_image"] = config.postprocess.max_detections_per_image
                                       ? json(*config.postprocess.max_detections_per_image)
                                       : json(nullptr);
  s["postprocess"] = pp;
  return s;
}

struct LoadedMethods {
  std::vector<MethodRun> runs;
  std::vector<std::vector<std::string>> warnings;
};

LoadedMethods load_methods(const RunConfig& config, const DatasetManifest& manifest,
                           const Dataset& dataset) {
  std::vector<std::string> all_ids;
  for (const auto& img : manifest.images) all_ids.push_back(img.image_id);
  const Dataset universe(all_ids, std::vector<std::vector<GroundTruthObject>>(all_ids.size()));

  LoadedMethods loaded;
  for (const auto& [id, path] : config.predictions) {
    PredictionFile file = load_predictions(path);
    file.method_id = id;
    std::vector<std::string> warnings;
    check_prediction_images(file, universe, config.unknown_images, &warnings);
    std::erase_if(file.detections,
                  [&](const Detection& d) { return !dataset.contains(d.image_id); });

    MethodRun run;
    run.method_id = id;
    run.detections = apply_postprocess(file.detections, config.postprocess, config.threads);
    run.covered_images = file.image_ids;
    const auto missing = missing_images(dataset, run);
    if (!missing.empty()) {
      warnings.push_back(std::to_string(missing.size()) +
                         " images without predictions treated as empty");
    }
    loaded.runs.push_back(std::move(run));
    loaded.warnings.push_back(std::move(warnings));
  }
  return loaded;
}

json result_json(const EvaluationResult& r) {
  json out;
  out["map"] = r.map;
  out["froc"] = r.froc;
  out["sensitivities"] = r.sensitivities;
  out["n_images"] = r.n_images;
  out["n_gt"] = r.n_gt;
  json classes = json::array();
  for (const auto& c : r.classes) {
    json cj;
    cj["class_id"] = c.class_id;
    cj["n_gt"] = c.n_gt;
    cj["n_predictions"] = c.n_predictions;
    cj["has_ground_truth"] = c.has_ground_truth;
    cj["ap"] = c.has_ground_truth ? json(c.ap) : json(nullptr);
    cj["froc"] = c.has_ground_truth ? json(c.froc) : json(nullptr);
    cj["sensitivities"] = c.has_ground_truth ? json(c.sensitivities) : json(nullptr);
    classes.push_back(std::move(cj));
  }
  out["classes"] = std::move(classes);
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace

std::string format_points(double value) { return format_fixed(value * 100.0, 2); }

void apply_config_json(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  std::optional<Official> official;
  for (const auto& [key, v] : doc.items()) {
    if (key == "manifest") {
      c.manifest = as<std::string>(v, key);
    } else if (key == "predictions") {
      if (!v.is_object()) throw ConfigError("config: predictions must map method id -> path");
      c.predictions.clear();
      for (const auto& [id, path] : v.items()) {
        c.predictions.emplace_back(id, as<std::string>(path, key + "." + id));
      }
    } else if (key == "baseline") {
      c.baseline = as<std::string>(v, key);
    } else if (key == "iou_threshold") {
      c.eval.iou_threshold = as<double>(v, key);
    } else if (key == "fppi_thresholds") {
      c.eval.fppi_thresholds = as<std::vector<double>>(v, key);
    } else if (key == "ap_interpolation") {
      c.eval.ap_interpolation = ap_interpolation_from_string(as<std::string>(v, key));
    } else if (key == "criterion") {
      c.criterion = criterion_from_string(as<std::string>(v, key));
    } else if (key == "radius") {
      c.radius = v.is_null() ? std::nullopt : std::optional<double>(as<double>(v, key));
    } else if (key == "duplicate_policy") {
      c.duplicates = duplicate_policy_from_string(as<std::string>(v, key));
    } else if (key == "official") {
      if (!v.is_null()) official = official_from_string(as<std::string>(v, key));
    } else if (key == "seed") {
      c.seed = as<std::uint64_t>(v, key);
    } else if (key == "iterations") {
      c.iterations = as<std::size_t>(v, key);
    } else if (key == "metric") {
      c.rank_metric = rank_metric_from_string(as<std::string>(v, key));
    } else if (key == "ties") {
      c.ties = tie_mode_from_string(as<std::string>(v, key));
    } else if (key == "split") {
      const auto s = as<std::string>(v, key);
      if (s == "all") {
        c.split.reset();
      } else {
        try {
          c.split = split_from_string(s);
        } catch (const ValidationError& e) {
          throw ConfigError(std::string("config: ") + e.what());
        }
      }
    } else if (key == "unknown_images") {
      const auto s = as<std::string>(v, key);
      if (s != "fail" && s != "warn") throw ConfigError("config: unknown_images must be fail or warn");
      c.unknown_images = s == "fail" ? Strictness::kFail : Strictness::kWarn;
    } else if (key == "out") {
      c.out = as<std::string>(v, key);
    } else if (key == "threads") {
      c.threads = as<std::size_t>(v, key);
    } else if (key == "inputs") {
      c.report_inputs.clear();
      for (const auto& p : as<std::vector<std::string>>(v, key)) c.report_inputs.emplace_back(p);
    } else if (key == "postprocess") {
      for (const auto& [pk, pv] : v.items()) {
        if (pk == "min_score") {
          c.postprocess.min_score = as<double>(pv, pk);
        } else if (pk == "nms_iou") {
          c.postprocess.nms_iou = as<double>(pv, pk);
        } else if (pk == "max_detections_per_image") {
          c.postprocess.max_detections_per_image =
              pv.is_null() ? std::nullopt : std::optional<std::size_t>(as<std::size_t>(pv, pk));
        } else {
          throw ConfigError("config: unknown key postprocess." + pk);
        }
      }
    } else if (key == "preprocess") {
      for (const auto& [pk, pv] : v.items()) {
        if (pk == "target_spacing") {
          const auto t = as<std::vector<double>>(pv, pk);
          if (t.size() != 3) throw ConfigError("config: target_spacing needs 3 values");
          c.preprocess.target_spacing = {t[0], t[1], t[2]};
        } else if (pk == "interpolation") {
          const auto s = as<std::string>(pv, pk);
          if (s != "trilinear" && s != "nearest") {
            throw ConfigError("config: interpolation must be trilinear or nearest");
          }
          c.preprocess.image_interpolation =
              s == "trilinear" ? Interpolation::kTrilinear : Interpolation::kNearest;
        } else if (pk == "clip") {
          if (pv.is_null()) {
            c.preprocess.clip.reset();
          } else {
            const auto t = as<std::vector<double>>(pv, pk);
            if (t.size() != 2) throw ConfigError("config: clip needs [lo, hi]");
            c.preprocess.clip = PercentileRange{t[0], t[1]};
          }
        } else if (pk == "normalize") {
          c.preprocess.normalize = as<bool>(pv, pk);
        } else {
          throw ConfigError("config: unknown key preprocess." + pk);
        }
      }
    } else {
      throw ConfigError("config: unknown key " + key);
    }
  }
  if (official) apply_official(c, *official);
}

void apply_config_file(RunConfig& config, const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": malformed JSON: " + e.what());
  }
  apply_config_json(config, doc);
}

void cmd_preprocess(const RunConfig& config) {
  config.preprocess.validate();
  const DatasetManifest manifest = load_manifest(config.manifest);
  ensure_out_dir(config.out);
  ensure_out_dir(config.out / "images");
  ensure_out_dir(config.out / "masks");

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < manifest.images.size(); ++i) {
    if (!config.split || manifest.images[i].split == *config.split) selected.push_back(i);
  }

  DatasetManifest out_manifest = manifest;
  std::vector<json> records(selected.size());
  parallel_for(selected.size(), config.threads, [&](std::size_t k) {
    const ManifestImage& img = manifest.images[selected[k]];
    ManifestImage& out_img = out_manifest.images[selected[k]];
    json rec;
    rec["image_id"] = img.image_id;
    auto run = [&](const fs::path& in, const fs::path& out, bool is_label) {
      std::vector<std::string> warnings;
      const Volume v = read_volume(in, &warnings);
      const Volume p = preprocess(v, config.preprocess, is_label);
      write_volume(p, out);
      json r;
      r["input"] = fs::absolute(in).lexically_normal().string();
      r["output"] = fs::absolute(out).lexically_normal().string();
      r["input_shape"] = v.shape();
      r["output_shape"] = p.shape();
      r["input_spacing"] = triple(v.spacing());
      r["output_spacing"] = triple(p.spacing());
      r["element_kind"] = std::string(to_string(p.kind()));
      r["warnings"] = warnings;
      return r;
    };
    if (img.image_path) {
      const fs::path out = config.out / "images" / (img.image_id + ".nii.gz");
      rec["image"] = run(*img.image_path, out, false);
      out_img.image_path = out;
    }
    if (img.mask) {
      const fs::path out = config.out / "masks" / (img.image_id + ".nii.gz");
      rec["mask"] = run(img.mask->path, out, true);
      out_img.mask->path = out;
    }
    records[k] = std::move(rec);
  });

  json prov;
  prov["dataset_id"] = manifest.dataset_id;
  prov["target_spacing"] = triple(config.preprocess.target_spacing);
  prov["image_interpolation"] =
      config.preprocess.image_interpolation == Interpolation::kTrilinear ? "trilinear" : "nearest";
  prov["label_interpolation"] = "nearest";
  prov["clip_percentiles"] = config.preprocess.clip
                                 ? json::array({config.preprocess.clip->lo, config.preprocess.clip->hi})
                                 : json(nullptr);
  prov["normalize"] = config.preprocess.normalize ? "zscore" : "none";
  prov["zscore_epsilon"] = kZscoreEpsilon;
  prov["images"] = records;
  write_text(config.out / "preprocess.json", prov.dump(2) + "\n");
  out_manifest.reset_cache();
  write_manifest(out_manifest, config.out / "manifest.json");
}

void cmd_extract(const RunConfig& config) {
  const DatasetManifest manifest = load_manifest(config.manifest);
  ensure_out_dir(config.out);
  parallel_for(manifest.images.size(), config.threads,
               [&](std::size_t i) { manifest.ground_truth(i); });
  DatasetManifest boxes = manifest;
  for (std::size_t i = 0; i < boxes.images.size(); ++i) {
    boxes.images[i].boxes = manifest.ground_truth(i);
    boxes.images[i].mask.reset();
  }
  boxes.reset_cache();
  write_manifest(boxes, config.out / "ground_truth.json");
}

std::vector<MethodEvaluation> cmd_evaluate(const RunConfig& config) {
  config.validate();
  if (config.predictions.empty()) throw ConfigError("evaluate needs at least one --pred");
  const DatasetManifest manifest = load_manifest(config.manifest);
  const Dataset dataset = manifest.to_dataset(config.split, config.threads);
  if (dataset.size() == 0) throw ValidationError("no images in the selected split");
  ensure_out_dir(config.out);

  LoadedMethods loaded = load_methods(config, manifest, dataset);
  const MatchSettings settings = config.match_settings();
  std::vector<MethodEvaluation> evaluations;
  for (std::size_t k = 0; k < loaded.runs.size(); ++k) {
    MethodEvaluation me;
    me.method_id = loaded.runs[k].method_id;
    me.result = evaluate(dataset, loaded.runs[k].detections, settings, config.eval,
                         config.threads);
    me.warnings = loaded.warnings[k];
    evaluations.push_back(std::move(me));
  }

  const std::string& baseline =
      config.baseline.empty() ? evaluations.front().method_id : config.baseline;
  std::map<std::string, double> maps;
  std::map<std::string, double> frocs;
  for (const auto& e : evaluations) {
    maps[e.method_id] = e.result.map;
    frocs[e.method_id] = e.result.froc;
  }
  const auto dmap = delta_vs_baseline(maps, baseline);
  const auto dfroc = delta_vs_baseline(frocs, baseline);

  json doc;
  doc["dataset_id"] = manifest.dataset_id;
  doc["n_images"] = dataset.size();
  doc["n_objects"] = dataset.object_count();
  doc["settings"] = settings_json(config);
  doc["baseline"] = baseline;
  json methods = json::array();
  for (const auto& e : evaluations) {
    json m = result_json(e.result);
    m["method_id"] = e.method_id;
    m["delta_map_points"] = dmap.at(e.method_id) * 100.0;
    m["delta_froc_points"] = dfroc.at(e.method_id) * 100.0;
    m["warnings"] = e.warnings;
    methods.push_back(std::move(m));
  }
  doc["methods"] = std::move(methods);
  write_text(config.out / "evaluation.json", doc.dump(2) + "\n");

  std::ostringstream csv;
  const std::string ds = csv_escape(manifest.dataset_id);
  csv << "method," << ds << "_mAP," << ds << "_FROC\n";
  for (const auto& e : evaluations) {
    csv << csv_escape(e.method_id) << "," << format_points(e.result.map) << ","
        << format_points(e.result.froc) << "\n";
  }
  write_text(config.out / "table.csv", csv.str());
  return evaluations;
}

RankingDistribution cmd_rank(const RunConfig& config) {
  config.validate();
  if (config.predictions.size() < 2) throw ConfigError("rank needs at least two --pred entries");
  const DatasetManifest manifest = load_manifest(config.manifest);
  const Dataset dataset = manifest.to_dataset(config.split, config.threads);
  if (dataset.size() == 0) throw ValidationError("no images in the selected split");
  ensure_out_dir(config.out);

  LoadedMethods loaded = load_methods(config, manifest, dataset);
  BootstrapConfig bc;
  bc.metric = config.rank_metric;
  bc.iterations = config.iterations;
  bc.seed = config.seed;
  bc.ties = config.ties;
  bc.threads = config.threads;
  RankingDistribution dist =
      bootstrap_rank(dataset, loaded.runs, config.match_settings(), config.eval, bc);

  const std::string& baseline =
      config.baseline.empty() ? dist.methods.front().method_id : config.baseline;
  std::map<std::string, double> maps;
  std::map<std::string, double> frocs;
  for (const auto& m : dist.methods) {
    maps[m.method_id] = m.map;
    frocs[m.method_id] = m.froc;
  }
  const auto dmap = delta_vs_baseline(maps, baseline);
  const auto dfroc = delta_vs_baseline(frocs, baseline);

  json doc;
  doc["dataset_id"] = manifest.dataset_id;
  doc["n_images"] = dist.n_images;
  doc["metric"] = std::string(to_string(dist.metric));
  doc["iterations"] = dist.iterations;
  doc["seed"] = dist.seed;
  doc["ties"] = std::string(to_string(dist.ties));
  doc["paired"] = true;
  doc["resample_unit"] = "image";
  doc["baseline"] = baseline;
  doc["settings"] = settings_json(config);
  doc["warnings"] = dist.warnings;
  json methods = json::array();
  for (const auto& m : dist.methods) {
    methods.push_back({{"method_id", m.method_id},
                       {"histogram", m.histogram},
                       {"mean_rank", m.mean_rank},
                       {"map", m.map},
                       {"froc", m.froc},
                       {"delta_map_points", dmap.at(m.method_id) * 100.0},
                       {"delta_froc_points", dfroc.at(m.method_id) * 100.0}});
  }
  doc["methods"] = std::move(methods);
  write_text(config.out / "ranking.json", doc.dump(2) + "\n");

  std::ostringstream csv;
  csv << "method,mean_rank";
  for (std::size_t r = 1; r <= dist.methods.size(); ++r) csv << ",rank_" << r;
  csv << ",mAP,FROC,delta_mAP,delta_FROC\n";
  for (const auto& m : dist.methods) {
    csv << csv_escape(m.method_id) << "," << format_fixed(m.mean_rank, 4);
    for (double h : m.histogram) csv << "," << format_fixed(h, 4);
    csv << "," << format_points(m.map) << "," << format_points(m.froc) << ","
        << format_points(dmap.at(m.method_id)) << "," << format_points(dfroc.at(m.method_id))
        << "\n";
  }
  write_text(config.out / "rank_histogram.csv", csv.str());
  return dist;
}

void cmd_report(const RunConfig& config) {
  if (config.report_inputs.empty()) throw ConfigError("report needs at least one --input");
  ensure_out_dir(config.out);

  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> cells;
  for (const auto& path : config.report_inputs) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path.string());
    json doc;
    try {
      doc = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ValidationError(path.string() + ": malformed JSON: " + e.what());
    }
    if (!doc.contains("dataset_id") || !doc.contains("methods")) {
      throw ValidationError(path.string() + ": not an evaluation.json document");
    }
    const std::string ds = doc["dataset_id"].get<std::string>();
    if (std::find(datasets.begin(), datasets.end(), ds) == datasets.end()) datasets.push_back(ds);
    for (const auto& m : doc["methods"]) {
      const std::string id = m.at("method_id").get<std::string>();
      if (std::find(methods.begin(), methods.end(), id) == methods.end()) methods.push_back(id);
      cells[{id, ds}] = {m.at("map").get<double>(), m.at("froc").get<double>()};
    }
  }

  std::ostringstream csv;
  csv << "method";
  for (const auto& ds : datasets) csv << "," << csv_escape(ds) << "_mAP," << csv_escape(ds) << "_FROC";
  csv << ",mean_mAP,mean_FROC\n";
  for (const auto& id : methods) {
    csv << csv_escape(id);
    double sum_map = 0.0;
    double sum_froc = 0.0;
    std::size_t n = 0;
    for (const auto& ds : datasets) {
      const auto it = cells.find({id, ds});
      if (it == cells.end()) {
        csv << ",,";
        continue;
      }
      csv << "," << format_points(it->second.first) << "," << format_points(it->second.second);
      sum_map += it->second.first;
      sum_froc += it->second.second;
      ++n;
    }
    if (n == 0) {
      csv << ",,\n";
    } else {
      csv << "," << format_points(sum_map / static_cast<double>(n)) << ","
          << format_points(sum_froc / static_cast<double>(n)) << "\n";
    }
  }
  write_text(config.out / "report.csv", csv.str());
}

}  // namespace voxeval

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
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "voxeval/commands.hpp"
#include "voxeval/error.hpp"

namespace {

using voxeval::RunConfig;

struct Flags {
  std::string manifest;
  std::vector<std::string> preds;
  std::string baseline;
  double iou = voxeval::kDefaultIouThreshold;
  std::vector<double> fppi;
  std::string ap_interpolation;
  std::size_t iterations = voxeval::kDefaultBootstrapIterations;
  std::uint64_t seed = 0;
  std::string criterion;
  double radius = 0.0;
  std::string duplicate_policy;
  std::string official;
  std::string metric;
  std::string ties;
  std::size_t threads = 0;
  std::string out = "voxeval_out";
  std::string config;
  std::string split;
  bool allow_unknown = false;
  double min_score = 0.0;
  double nms_iou = 0.1;
  std::size_t max_det = 0;
  std::vector<double> target_spacing;
  std::string interp;
  std::vector<double> clip;
  bool no_clip = false;
  bool no_normalize = false;
  std::vector<std::string> inputs;
};

struct Options {
  CLI::Option* iou = nullptr;
  CLI::Option* criterion = nullptr;
  CLI::Option* radius = nullptr;
  CLI::Option* duplicates = nullptr;
  CLI::Option* max_det = nullptr;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", f.threads, "Worker threads (0 = auto)")->capture_default_str();
  sub->add_option("--config", f.config, "JSON config file; its values override flags");
  sub->add_option("--split", f.split, "Restrict to one split: train, val, test or all");
}

void add_matching(CLI::App* sub, Flags& f, Options& o) {
  sub->add_option("--manifest", f.manifest, "Dataset manifest");
  sub->add_option("--pred", f.preds, "Predictions as id=path (repeatable)");
  sub->add_option("--baseline", f.baseline, "Baseline method id for deltas");
  o.iou = sub->add_option("--iou", f.iou, "IoU threshold")->capture_default_str();
  sub->add_option("--fppi", f.fppi, "FROC false positives per image thresholds")->delimiter(',');
  sub->add_option("--ap-interpolation", f.ap_interpolation, "all_points or points_101");
  o.criterion =
      sub->add_option("--criterion", f.criterion, "iou, center_half_diameter or center_in_radius");
  o.radius = sub->add_option("--radius", f.radius, "Explicit radius (mm) for center_in_radius");
  o.duplicates = sub->add_option("--duplicate-policy", f.duplicate_policy, "fp or ignore");
  sub->add_option("--official", f.official, "Preset protocol: luna16, pn9 or ctaa");
  sub->add_flag("--allow-unknown-images", f.allow_unknown,
                "Warn instead of failing on prediction image ids absent from the manifest");
  sub->add_option("--min-score", f.min_score, "Drop detections below this score");
  sub->add_option("--nms-iou", f.nms_iou, "Per-class NMS IoU threshold");
  o.max_det = sub->add_option("--max-det", f.max_det, "Keep the top-k detections per image");
}

void build_config(RunConfig& c, const Flags& f, const Options& o) {
  c.manifest = f.manifest;
  for (const auto& p : f.preds) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == p.size()) {
      throw voxeval::ConfigError("--pred expects id=path, got " + p);
    }
    c.predictions.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
  c.baseline = f.baseline;
  if (!f.official.empty()) voxeval::apply_official(c, voxeval::official_from_string(f.official));
  if (o.iou != nullptr && (o.iou->count() > 0 || f.official.empty())) c.eval.iou_threshold = f.iou;
  if (!f.fppi.empty()) c.eval.fppi_thresholds = f.fppi;
  if (!f.ap_interpolation.empty()) {
    c.eval.ap_interpolation = voxeval::ap_interpolation_from_string(f.ap_interpolation);
  }
  if (!f.criterion.empty()) c.criterion = voxeval::criterion_from_string(f.criterion);
  if (o.radius != nullptr && o.radius->count() > 0) c.radius = f.radius;
  if (!f.duplicate_policy.empty()) {
    c.duplicates = voxeval::duplicate_policy_from_string(f.duplicate_policy);
  }
  c.seed = f.seed;
  c.iterations = f.iterations;
  if (!f.metric.empty()) c.rank_metric = voxeval::rank_metric_from_string(f.metric);
  if (!f.ties.empty()) c.ties = voxeval::tie_mode_from_string(f.ties);
  c.threads = f.threads;
  c.out = f.out;
  if (!f.split.empty() && f.split != "all") {
    try {
      c.split = voxeval::split_from_string(f.split);
    } catch (const voxeval::ValidationError& e) {
      throw voxeval::ConfigError(e.what());
    }
  }
  c.unknown_images = f.allow_unknown ? voxeval::Strictness::kWarn : voxeval::Strictness::kFail;
  c.postprocess.min_score = f.min_score;
  c.postprocess.nms_iou = f.nms_iou;
  if (o.max_det != nullptr && o.max_det->count() > 0) {
    c.postprocess.max_detections_per_image = f.max_det;
  }
  if (!f.target_spacing.empty()) {
    if (f.target_spacing.size() != 3) throw voxeval::ConfigError("--target-spacing needs 3 values");
    c.preprocess.target_spacing = {f.target_spacing[0], f.target_spacing[1], f.target_spacing[2]};
  }
  if (!f.interp.empty()) {
    if (f.interp != "trilinear" && f.interp != "nearest") {
      throw voxeval::ConfigError("--interp must be trilinear or nearest");
    }
    c.preprocess.image_interpolation = f.interp == "trilinear" ? voxeval::Interpolation::kTrilinear
                                                               : voxeval::Interpolation::kNearest;
  }
  if (!f.clip.empty()) {
    if (f.clip.size() != 2) throw voxeval::ConfigError("--clip needs lo,hi percentiles");
    c.preprocess.clip = voxeval::PercentileRange{f.clip[0], f.clip[1]};
  }
  if (f.no_clip) c.preprocess.clip.reset();
  if (f.no_normalize) c.preprocess.normalize = false;
  for (const auto& in : f.inputs) c.report_inputs.emplace_back(in);
  if (!f.config.empty()) voxeval::apply_config_file(c, f.config);
}

void print_warnings(const std::vector<voxeval::MethodEvaluation>& evals) {
  for (const auto& e : evals) {
    for (const auto& w : e.warnings) std::cerr << "warning: " << e.method_id << ": " << w << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxeval: reproducible evaluation of 3D lesion detectors"};
  app.require_subcommand(1);
  Flags f;
  Options o;

  auto* pre = app.add_subcommand("preprocess", "Resample and normalize volumes");
  pre->add_option("--manifest", f.manifest, "Dataset manifest");
  pre->add_option("--target-spacing", f.target_spacing, "Target spacing in mm (x,y,z)")
      ->delimiter(',');
  pre->add_option("--interp", f.interp, "Image interpolation: trilinear or nearest");
  pre->add_option("--clip", f.clip, "Clip percentiles lo,hi")->delimiter(',');
  pre->add_flag("--no-clip", f.no_clip, "Disable percentile clipping");
  pre->add_flag("--no-normalize", f.no_normalize, "Disable z-score normalization");
  add_common(pre, f);

  auto* ext = app.add_subcommand("extract", "Convert masks to ground-truth boxes");
  ext->add_option("--manifest", f.manifest, "Dataset manifest");
  add_common(ext, f);

  auto* ev = app.add_subcommand("evaluate", "Compute mAP and FROC per method");
  add_matching(ev, f, o);
  add_common(ev, f);

  auto* rk = app.add_subcommand("rank", "Paired bootstrap ranking of methods");
  add_matching(rk, f, o);
  rk->add_option("--iterations", f.iterations, "Bootstrap iterations")->capture_default_str();
  rk->add_option("--seed", f.seed, "Bootstrap seed")->capture_default_str();
  rk->add_option("--metric", f.metric, "Ranking metric: map or froc");
  rk->add_option("--ties", f.ties, "Tie handling: fractional or min");
  add_common(rk, f);

  auto* rp = app.add_subcommand("report", "Merge evaluation.json files into a table");
  rp->add_option("--input", f.inputs, "evaluation.json files (repeatable)");
  add_common(rp, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(voxeval::ExitCode::kConfig);
  }

  try {
    RunConfig config;
    build_config(config, f, o);
    if (pre->parsed()) {
      voxeval::cmd_preprocess(config);
    } else if (ext->parsed()) {
      voxeval::cmd_extract(config);
    } else if (ev->parsed()) {
      const auto evals = voxeval::cmd_evaluate(config);
      print_warnings(evals);
      for (const auto& e : evals) {
        std::cout << e.method_id << " mAP=" << voxeval::format_points(e.result.map)
                  << " FROC=" << voxeval::format_points(e.result.froc) << "\n";
      }
    } else if (rk->parsed()) {
      const auto dist = voxeval::cmd_rank(config);
      for (const auto& w : dist.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& m : dist.methods) {
        std::cout << m.method_id << " mean_rank=" << m.mean_rank << "\n";
      }
    } else if (rp->parsed()) {
      voxeval::cmd_report(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return voxeval::exit_code_for(e);
  }
  return 0;
}

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
#include "voxeval/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "voxeval/error.hpp"
#include "voxeval/parallel.hpp"

namespace voxeval {

std::string_view to_string(RankMetric metric) {
  return metric == RankMetric::kMap ? "map" : "froc";
}

RankMetric rank_metric_from_string(std::string_view name) {
  if (name == "map" || name == "mAP") return RankMetric::kMap;
  if (name == "froc" || name == "FROC") return RankMetric::kFroc;
  throw ConfigError("ranking metric must be map or froc, got " + std::string(name));
}

std::string_view to_string(TieMode mode) {
  return mode == TieMode::kFractional ? "fractional" : "min";
}

TieMode tie_mode_from_string(std::string_view name) {
  if (name == "fractional") return TieMode::kFractional;
  if (name == "min") return TieMode::kMin;
  throw ConfigError("tie mode must be fractional or min, got " + std::string(name));
}

std::vector<std::string> missing_images(const Dataset& dataset, const MethodRun& run) {
  std::set<std::string> covered;
  if (run.covered_images) {
    covered.insert(run.covered_images->begin(), run.covered_images->end());
  } else {
    for (const auto& d : run.detections) covered.insert(d.image_id);
  }
  std::vector<std::string> missing;
  for (const auto& id : dataset.image_ids()) {
    if (!covered.contains(id)) missing.push_back(id);
  }
  return missing;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Ranked outcomes of one class, cut into runs of equal score from one image.
// Repeating each run w[image] times reproduces the stable descending-score
// order of a multiset that lists copies of an image back to back.
struct ClassStream {
  struct Run {
    std::size_t image;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<RankedOutcome> outcomes;
  std::vector<Run> runs;
  std::vector<std::size_t> gt_per_image;
};

struct PreparedMethod {
  std::vector<ClassStream> classes;
};

PreparedMethod prepare(const Dataset& dataset, const MethodRun& run,
                       const MatchSettings& settings, std::span<const int> classes,
                       std::size_t threads) {
  const MatchTable table = match_dataset(dataset, run.detections, settings, threads, classes);
  PreparedMethod prepared;
  for (int cls : classes) {
    const auto slot = static_cast<std::size_t>(
        std::lower_bound(table.class_ids.begin(), table.class_ids.end(), cls) -
        table.class_ids.begin());
    const auto& matches = table.results[slot];

    struct Entry {
      RankedOutcome outcome;
      std::size_t image;
    };
    std::vector<Entry> entries;
    ClassStream stream;
    stream.gt_per_image.resize(matches.size());
    for (std::size_t img = 0; img < matches.size(); ++img) {
      stream.gt_per_image[img] = matches[img].n_gt;
      for (const auto& p : matches[img].predictions) {
        if (p.outcome == MatchOutcome::kIgnored) continue;
        entries.push_back({{p.score, p.outcome == MatchOutcome::kTruePositive}, img});
      }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.outcome.score > b.outcome.score;
    });
    for (std::size_t k = 0; k < entries.size(); ++k) {
      stream.outcomes.push_back(entries[k].outcome);
      if (k == 0 || entries[k].image != entries[k - 1].image ||
          entries[k].outcome.score != entries[k - 1].outcome.score) {
        stream.runs.push_back({entries[k].image, k, k + 1});
      } else {
        stream.runs.back().end = k + 1;
      }
    }
    prepared.classes.push_back(std::move(stream));
  }
  return prepared;
}

double score_prepared(const PreparedMethod& method, std::span<const std::size_t> weights,
                      std::size_t n_images, const EvalConfig& config, RankMetric metric,
                      std::vector<RankedOutcome>& scratch) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& stream : method.classes) {
    std::size_t n_gt = 0;
    for (std::size_t img = 0; img < weights.size(); ++img) {
      n_gt += weights[img] * stream.gt_per_image[img];
    }
    if (n_gt == 0) continue;
    scratch.clear();
    for (const auto& run : stream.runs) {
      for (std::size_t copy = 0; copy < weights[run.image]; ++copy) {
        scratch.insert(scratch.end(), stream.outcomes.begin() + static_cast<std::ptrdiff_t>(run.begin),
                       stream.outcomes.begin() + static_cast<std::ptrdiff_t>(run.end));
      }
    }
    if (metric == RankMetric::kMap) {
      sum += average_precision(pr_curve_from_ranked(scratch, n_gt), config.ap_interpolation);
    } else {
      sum += froc_from_ranked(scratch, n_gt, n_images, config.fppi_thresholds).score;
    }
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

std::vector<std::size_t> draw_weights(std::uint64_t seed, std::size_t iteration,
                                      std::size_t n_images) {
  std::vector<std::size_t> weights(n_images, 0);
  for (std::size_t i : bootstrap_draw(seed, iteration, n_images)) ++weights[i];
  return weights;
}

// Adds one iteration's ranks to the histograms and rank sums.
void accumulate_ranks(std::span<const double> metrics, TieMode mode,
                      std::vector<std::vector<double>>& histograms,
                      std::vector<double>& rank_sums) {
  const std::size_t m = metrics.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return metrics[a] > metrics[b]; });
  for (std::size_t lo = 0; lo < m;) {
    std::size_t hi = lo + 1;
    while (hi < m && metrics[order[hi]] == metrics[order[lo]]) ++hi;
    const double tied = static_cast<double>(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const std::size_t method = order[k];
      if (mode == TieMode::kFractional) {
        rank_sums[method] += static_cast<double>(lo + 1 + hi) / 2.0;
        for (std::size_t r = lo; r < hi; ++r) histograms[method][r] += 1.0 / tied;
      } else {
        rank_sums[method] += static_cast<double>(lo + 1);
        histograms[method][lo] += 1.0;
      }
    }
    lo = hi;
  }
}

}  // namespace

std::uint64_t iteration_seed(std::uint64_t seed, std::size_t iteration) {
  constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  return splitmix64(splitmix64(seed) + kGamma * (static_cast<std::uint64_t>(iteration) + 1));
}

std::vector<std::size_t> bootstrap_draw(std::uint64_t seed, std::size_t iteration,
                                        std::size_t n_images) {
  if (n_images == 0) throw ValidationError("bootstrap over an empty image universe");
  std::mt19937_64 rng(iteration_seed(seed, iteration));
  std::uniform_int_distribution<std::size_t> pick(0, n_images - 1);
  std::vector<std::size_t> draw(n_images);
  for (auto& i : draw) i = pick(rng);
  return draw;
}

std::vector<double> assign_ranks(std::span<const double> metrics, TieMode mode) {
  std::vector<std::vector<double>> histogram(metrics.size(),
                                             std::vector<double>(metrics.size(), 0.0));
  std::vector<double> ranks(metrics.size(), 0.0);
  accumulate_ranks(metrics, mode, histogram, ranks);
  return ranks;
}

std::vector<double> score_resample(const Dataset& dataset, std::span<const MethodRun> runs,
                                   const MatchSettings& settings, const EvalConfig& config,
                                   RankMetric metric, std::span<const std::size_t> weights) {
  if (weights.size() != dataset.size()) {
    throw ValidationError("resample weights do not match the image universe");
  }
  const std::vector<int> classes = dataset.class_ids();
  const std::size_t n = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  std::vector<double> scores;
  std::vector<RankedOutcome> scratch;
  for (const auto& run : runs) {
    const PreparedMethod prepared = prepare(dataset, run, settings, classes, 1);
    scores.push_back(score_prepared(prepared, weights, n, config, metric, scratch));
  }
  return scores;
}

RankingDistribution bootstrap_rank(const Dataset& dataset, std::span<const MethodRun> runs,
                                   const MatchSettings& settings, const EvalConfig& config,
                                   const BootstrapConfig& bootstrap) {
  if (dataset.size() == 0) throw ValidationError("bootstrap over an empty image universe");
  if (runs.size() < 2) throw ValidationError("ranking needs at least two methods");
  config.validate();
  settings.criterion.validate();
  {
    std::set<std::string> ids;
    for (const auto& run : runs) {
      if (!ids.insert(run.method_id).second) {
        throw ValidationError("duplicate method id " + run.method_id);
      }
    }
  }

  RankingDistribution out;
  out.metric = bootstrap.metric;
  out.ties = bootstrap.ties;
  out.iterations = bootstrap.iterations;
  out.seed = bootstrap.seed;
  out.n_images = dataset.size();

  const std::vector<int> classes = dataset.class_ids();
  const std::size_t m = runs.size();
  std::vector<PreparedMethod> prepared;
  prepared.reserve(m);
  for (const auto& run : runs) {
    const auto missing = missing_images(dataset, run);
    if (!missing.empty()) {
      out.warnings.push_back("method " + run.method_id + ": " +
                             std::to_string(missing.size()) +
                             " images without predictions treated as empty");
    }
    prepared.push_back(prepare(dataset, run, settings, classes, bootstrap.threads));
  }

  for (std::size_t k = 0; k < m; ++k) {
    const EvaluationResult full = evaluate(dataset, runs[k].detections, settings, config,
                                           bootstrap.threads);
    MethodRanking mr;
    mr.method_id = runs[k].method_id;
    mr.histogram.assign(m, 0.0);
    mr.map = full.map;
    mr.froc = full.froc;
    out.methods.push_back(std::move(mr));
  }

  std::vector<std::vector<double>> metrics(bootstrap.iterations, std::vector<double>(m));
  parallel_for(bootstrap.iterations, bootstrap.threads, [&](std::size_t it) {
    const auto weights = draw_weights(bootstrap.seed, it, dataset.size());
    std::vector<RankedOutcome> scratch;
    for (std::size_t k = 0; k < m; ++k) {
      metrics[it][k] = score_prepared(prepared[k], weights, dataset.size(), config,
                                      bootstrap.metric, scratch);
    }
  });

  std::vector<std::vector<double>> histograms(m, std::vector<double>(m, 0.0));
  std::vector<double> rank_sums(m, 0.0);
  for (const auto& it_metrics : metrics) {
    accumulate_ranks(it_metrics, bootstrap.ties, histograms, rank_sums);
  }
  for (std::size_t k = 0; k < m; ++k) {
    out.methods[k].histogram = std::move(histograms[k]);
    out.methods[k].mean_rank =
        bootstrap.iterations == 0 ? 0.0
                                  : rank_sums[k] / static_cast<double>(bootstrap.iterations);
  }
  return out;
}

std::map<std::string, double> delta_vs_baseline(const std::map<std::string, double>& metrics,
                                                const std::string& baseline_id) {
  const auto base = metrics.find(baseline_id);
  if (base == metrics.end()) throw ValidationError("unknown baseline method " + baseline_id);
  std::map<std::string, double> deltas;
  for (const auto& [id, value] : metrics) deltas[id] = value - base->second;
  return deltas;
}

}  // namespace voxeval

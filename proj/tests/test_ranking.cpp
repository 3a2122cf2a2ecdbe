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
#include "voxeval/error.hpp"
#include "voxeval/ranking.hpp"

using namespace voxeval;

namespace {

struct Fixture {
  Dataset dataset;
  std::vector<MethodRun> runs;
};

// n images with 1-2 objects of two classes; `methods` noisy detectors.
Fixture make_fixture(std::size_t n, std::size_t methods, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0, 40);
  std::uniform_real_distribution<double> unit(0, 1);
  std::vector<std::string> ids;
  std::vector<std::vector<GroundTruthObject>> gts;
  Fixture f;
  f.runs.resize(methods);
  for (std::size_t m = 0; m < methods; ++m) f.runs[m].method_id = "m" + std::to_string(m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "img" + std::to_string(i);
    ids.push_back(id);
    gts.emplace_back();
    const std::size_t k = rng() % 3;  // some images carry no ground truth
    for (std::size_t o = 0; o < k; ++o) {
      const Vec3 lo{pos(rng) + 60.0 * double(o), pos(rng), pos(rng)};
      const BoundingBox3D b{lo, {lo[0] + 5, lo[1] + 5, lo[2] + 5}};
      gts.back().push_back(GroundTruthObject::from_box(id, int(o), b));
      for (auto& run : f.runs) {
        if (unit(rng) < 0.3) continue;
        run.detections.push_back({id, int(o), b, double(rng() % 10) / 10.0});
      }
    }
    for (auto& run : f.runs) {
      if (unit(rng) < 0.5) continue;
      run.detections.push_back(
          {id, int(rng() % 2), {{200, 0, 0}, {203, 3, 3}}, double(rng() % 10) / 10.0});
    }
  }
  f.dataset = Dataset(ids, gts);
  return f;
}

// Metric on the resampled multiset built explicitly: image i appears w[i]
// times under distinct ids, copies listed back to back in image order.
std::vector<double> naive_resample(const Fixture& f, std::span<const std::size_t> w,
                                   RankMetric metric) {
  std::vector<std::string> ids;
  std::vector<std::vector<GroundTruthObject>> gts;
  std::vector<std::vector<Detection>> dets(f.runs.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t c = 0; c < w[i]; ++c) {
      const std::string id = f.dataset.image_ids()[i] + "#" + std::to_string(c);
      ids.push_back(id);
      gts.emplace_back();
      for (auto g : f.dataset.ground_truth(i)) {
        g.image_id = id;
        gts.back().push_back(g);
      }
      for (std::size_t m = 0; m < f.runs.size(); ++m) {
        for (const auto& d : f.runs[m].detections) {
          if (d.image_id != f.dataset.image_ids()[i]) continue;
          Detection copy = d;
          copy.image_id = id;
          dets[m].push_back(copy);
        }
      }
    }
  }
  const Dataset resampled(ids, gts);
  std::vector<double> out;
  for (std::size_t m = 0; m < f.runs.size(); ++m) {
    try {
      const auto r = evaluate(resampled, dets[m], {}, {});
      out.push_back(metric == RankMetric::kMap ? r.map : r.froc);
    } catch (const NoGroundTruthError&) {
      out.push_back(0.0);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("defaults and parsing") {
  CHECK(kDefaultBootstrapIterations == 1000);
  CHECK(BootstrapConfig{}.iterations == 1000);
  CHECK(rank_metric_from_string("froc") == RankMetric::kFroc);
  CHECK(tie_mode_from_string("min") == TieMode::kMin);
  CHECK_THROWS_AS(tie_mode_from_string("dense"), ConfigError);
}

TEST_CASE("assign ranks") {
  const std::vector<double> m{0.5, 0.9, 0.5, 0.1};
  CHECK(assign_ranks(m, TieMode::kFractional) == std::vector<double>{2.5, 1, 2.5, 4});
  CHECK(assign_ranks(m, TieMode::kMin) == std::vector<double>{2, 1, 2, 4});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(2 + rng() % 6);
    for (auto& x : xs) x = double(rng() % 4);
    const auto r = assign_ranks(xs, TieMode::kFractional);
    double sum = 0.0;
    for (double v : r) sum += v;
    const double M = double(xs.size());
    CHECK(sum == M * (M + 1) / 2);
  }
}

TEST_CASE("draws depend on (seed, iteration) only") {
  CHECK(iteration_seed(1, 2) == iteration_seed(1, 2));
  CHECK(iteration_seed(1, 2) != iteration_seed(2, 1));
  const auto a = bootstrap_draw(5, 17, 100);
  CHECK(a == bootstrap_draw(5, 17, 100));
  CHECK(a != bootstrap_draw(5, 18, 100));
  CHECK(a.size() == 100);
  for (auto i : a) CHECK(i < 100);
}

TEST_CASE("paired resample scoring equals the explicit multiset") {
  const Fixture f = make_fixture(12, 3, 41);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::size_t> w(12, 0);
    for (std::size_t k = 0; k < 12; ++k) ++w[rng() % 12];
    for (RankMetric metric : {RankMetric::kMap, RankMetric::kFroc}) {
      const auto fast = score_resample(f.dataset, f.runs, {}, {}, metric, w);
      const auto slow = naive_resample(f, w, metric);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t m = 0; m < fast.size(); ++m) {
        CHECK(fast[m] == doctest::Approx(slow[m]).epsilon(1e-12));
      }
    }
  }
  std::vector<std::size_t> all_empty(12, 0);
  for (std::size_t i = 0; i < 12; ++i) {
    if (f.dataset.ground_truth(i).empty()) {
      all_empty[i] = 12;
      break;
    }
  }
  for (double v : score_resample(f.dataset, f.runs, {}, {}, RankMetric::kMap, all_empty)) {
    CHECK(v == 0.0);
  }
}

TEST_CASE("symmetric methods tie everywhere") {
  Fixture f = make_fixture(20, 1, 47);
  f.runs.push_back(f.runs[0]);
  f.runs[1].method_id = "copy";
  BootstrapConfig bc;
  bc.iterations = 200;
  const auto d = bootstrap_rank(f.dataset, f.runs, {}, {}, bc);
  for (const auto& m : d.methods) {
    CHECK(m.mean_rank == 1.5);
    CHECK(m.histogram == std::vector<double>{100, 100});
  }
  bc.ties = TieMode::kMin;
  const auto mn = bootstrap_rank(f.dataset, f.runs, {}, {}, bc);
  CHECK(mn.methods[0].histogram == std::vector<double>{200, 0});
}

TEST_CASE("a dominant method ranks first in every iteration") {
  Fixture f = make_fixture(20, 1, 53);
  MethodRun perfect{"perfect", {}, f.dataset.image_ids()};
  for (std::size_t i = 0; i < f.dataset.size(); ++i)
    for (const auto& g : f.dataset.ground_truth(i))
      perfect.detections.push_back({g.image_id, g.class_id, g.box, 0.9});
  MethodRun nothing{"nothing", {}, std::vector<std::string>{}};
  const std::vector<MethodRun> runs{nothing, perfect};
  BootstrapConfig bc;
  bc.iterations = 300;
  const auto d = bootstrap_rank(f.dataset, runs, {}, {}, bc);
  // Draws without any ground truth tie both methods at 0.
  const double tied = d.methods[0].histogram[0] * 2.0;
  CHECK(d.methods[1].histogram[0] + d.methods[0].histogram[0] == 300);
  CHECK(d.methods[1].histogram[0] == doctest::Approx(300 - tied / 2.0));
  CHECK(d.methods[1].map == 1.0);
  CHECK(d.methods[0].map == 0.0);
  CHECK(d.warnings.size() == 1);  // "nothing" covers no image
}

TEST_CASE("histograms sum to iterations; thread count and relabeling do not matter") {
  const Fixture f = make_fixture(25, 3, 59);
  BootstrapConfig bc;
  bc.iterations = 150;
  bc.seed = 99;
  bc.threads = 1;
  const auto a = bootstrap_rank(f.dataset, f.runs, {}, {}, bc);
  bc.threads = 4;
  const auto b = bootstrap_rank(f.dataset, f.runs, {}, {}, bc);
  for (std::size_t m = 0; m < a.methods.size(); ++m) {
    CHECK(a.methods[m].histogram == b.methods[m].histogram);
    CHECK(a.methods[m].mean_rank == b.methods[m].mean_rank);
    double sum = 0.0;
    for (double h : a.methods[m].histogram) sum += h;
    CHECK(sum == doctest::Approx(150.0).epsilon(1e-12));
  }
  auto permuted = f.runs;
  std::swap(permuted[0], permuted[2]);
  const auto p = bootstrap_rank(f.dataset, permuted, {}, {}, bc);
  CHECK(p.methods[0].histogram == a.methods[2].histogram);
  CHECK(p.methods[2].histogram == a.methods[0].histogram);
  CHECK(p.methods[1].histogram == a.methods[1].histogram);
}

TEST_CASE("bootstrap errors") {
  const Fixture f = make_fixture(5, 1, 61);
  CHECK_THROWS_AS(bootstrap_rank(f.dataset, f.runs, {}, {}, {}), ValidationError);
  const Fixture g = make_fixture(5, 2, 61);
  CHECK_THROWS_AS(bootstrap_rank(Dataset{}, g.runs, {}, {}, {}), ValidationError);
}

TEST_CASE("delta vs baseline") {
  const std::map<std::string, double> m{{"base", 0.76}, {"new", 0.80}, {"old", 0.70}};
  const auto d = delta_vs_baseline(m, "base");
  CHECK(d.at("base") == 0.0);
  CHECK(d.at("new") * 100.0 == doctest::Approx(4.0));
  CHECK(d.at("old") < d.at("base"));
  CHECK(d.at("base") < d.at("new"));
  CHECK_THROWS_AS(delta_vs_baseline(m, "missing"), ValidationError);
}

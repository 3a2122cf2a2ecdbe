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
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "voxeval/error.hpp"
#include "voxeval/preprocessing.hpp"

using namespace voxeval;

namespace {

Volume iota_volume(Shape3 shape, Vec3 spacing, ElementKind kind = ElementKind::kFloat32) {
  std::vector<double> v(voxel_count(shape));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = double(i);
  return make_volume(shape, spacing, {0, 0, 0}, kind, v);
}

Volume random_volume(std::mt19937_64& rng, double scale, double shift) {
  std::uniform_int_distribution<std::size_t> side(2, 12);
  const Shape3 shape{side(rng), side(rng), side(rng)};
  std::normal_distribution<double> nd(shift, scale);
  std::vector<double> v(voxel_count(shape));
  for (auto& x : v) x = nd(rng);
  return make_volume(shape, {1, 1, 1}, {0, 0, 0}, ElementKind::kFloat64, v);
}

std::pair<double, double> mean_std(const Volume& v) {
  const auto d = v.to_doubles();
  double m = 0.0;
  for (double x : d) m += x;
  m /= double(d.size());
  double s = 0.0;
  for (double x : d) s += (x - m) * (x - m);
  return {m, std::sqrt(s / double(d.size()))};
}

}  // namespace

TEST_CASE("defaults") {
  const PreprocessConfig ct = PreprocessConfig::ct();
  CHECK(ct.target_spacing == Vec3{1.0, 1.0, 1.0});
  REQUIRE(ct.clip.has_value());
  CHECK(ct.clip->lo == 0.5);
  CHECK(ct.clip->hi == 99.5);
  CHECK(ct.normalize);
  CHECK_FALSE(PreprocessConfig::mri().clip.has_value());
  CHECK(kZscoreEpsilon == 1e-8);
}

TEST_CASE("config validation") {
  PreprocessConfig c;
  c.target_spacing = {1, 0, 1};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = PreprocessConfig{};
  c.clip = PercentileRange{60, 40};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.clip = PercentileRange{-1, 40};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(resample(iota_volume({2, 2, 2}, {1, 1, 1}), {1, -1, 1},
                           Interpolation::kTrilinear),
                  ConfigError);
}

TEST_CASE("resampled shape") {
  CHECK(resampled_shape({10, 10, 10}, {2, 2, 2}, {1, 1, 1}) == Shape3{20, 20, 20});
  CHECK(resampled_shape({3, 5, 1}, {0.5, 0.5, 0.1}, {1, 1, 1}) == Shape3{2, 3, 1});
  CHECK(resampled_shape({7, 1, 1}, {1, 1, 1}, {2, 1, 1}) == Shape3{4, 1, 1});
  const Volume v = resample(iota_volume({10, 10, 10}, {2, 2, 2}), {1, 1, 1},
                            Interpolation::kTrilinear);
  CHECK(v.shape() == Shape3{20, 20, 20});
  CHECK(v.spacing() == Vec3{1, 1, 1});
}

TEST_CASE("constant volume stays constant") {
  const Volume c = make_volume({5, 4, 3}, {2.5, 0.7, 1.3}, {1, 2, 3}, ElementKind::kFloat32,
                               std::vector<double>(60, 42.5));
  for (Interpolation mode : {Interpolation::kTrilinear, Interpolation::kNearest}) {
    const Volume r = resample(c, {1, 1, 1}, mode);
    CHECK(r.origin() == c.origin());
    for (double x : r.to_doubles()) CHECK(x == 42.5);
  }
}

TEST_CASE("identity spacing is exact") {
  const Volume v = iota_volume({4, 3, 5}, {0.8, 0.8, 2.5}, ElementKind::kInt16);
  const Volume r = resample(v, {0.8, 0.8, 2.5}, Interpolation::kTrilinear);
  CHECK(r == v);
}

TEST_CASE("trilinear matches the pointwise formula") {
  const Volume v = iota_volume({3, 3, 3}, {2, 2, 2});
  const Volume r = resample(v, {1, 1, 1}, Interpolation::kTrilinear);
  REQUIRE(r.shape() == Shape3{6, 6, 6});
  for (std::size_t z = 0; z < 6; ++z) {
    for (std::size_t y = 0; y < 6; ++y) {
      for (std::size_t x = 0; x < 6; ++x) {
        CHECK(r.at(x, y, z) == doctest::Approx(oracle::trilinear_at(v, {1, 1, 1}, x, y, z)).epsilon(1e-6));
      }
    }
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Volume w = random_volume(rng, 10.0, 0.0);
    const Vec3 t{0.7, 1.6, 0.45};
    const Volume out = resample(w, t, Interpolation::kTrilinear, 2);
    CHECK(out.kind() == ElementKind::kFloat64);
    for (std::size_t z = 0; z < out.shape()[2]; ++z) {
      for (std::size_t y = 0; y < out.shape()[1]; ++y) {
        for (std::size_t x = 0; x < out.shape()[0]; ++x) {
          CHECK(out.at(x, y, z) == doctest::Approx(oracle::trilinear_at(w, t, x, y, z)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("nearest resampling keeps kind and label closure; idempotent") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> lab(0, 3);
  std::vector<double> v(8 * 7 * 6);
  for (auto& x : v) x = lab(rng) * 2;
  const Volume mask = make_volume({8, 7, 6}, {1.3, 0.6, 2.2}, {0, 0, 0}, ElementKind::kUInt8, v);
  const Volume r = resample(mask, {1, 1, 1}, Interpolation::kNearest);
  CHECK(r.kind() == ElementKind::kUInt8);
  const std::set<double> in(v.begin(), v.end());
  for (double x : r.to_doubles()) CHECK(in.contains(x));
  CHECK(resample(r, {1, 1, 1}, Interpolation::kNearest) == r);
  const Volume t = resample(mask, {1, 1, 1}, Interpolation::kTrilinear);
  CHECK(resample(t, {1, 1, 1}, Interpolation::kTrilinear) == t);
}

TEST_CASE("percentile matches a sort-based oracle") {
  std::vector<double> thousand(1000);
  for (int i = 0; i < 1000; ++i) thousand[i] = i;
  CHECK(percentile(thousand, 0.5) == doctest::Approx(4.995).epsilon(1e-12));
  CHECK(percentile(thousand, 99.5) == doctest::Approx(994.005).epsilon(1e-12));
  CHECK(oracle::sorted_percentile(thousand, 0.5) == doctest::Approx(4.995).epsilon(1e-12));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(1 + rng() % 40);
    for (auto& x : xs) x = u(rng);
    const double p = std::uniform_real_distribution<double>(0, 100)(rng);
    CHECK(percentile(xs, p) == doctest::Approx(oracle::sorted_percentile(xs, p)).epsilon(1e-12));
  }
  CHECK_THROWS(percentile(std::vector<double>{}, 50));
}

TEST_CASE("clip_percentiles") {
  const Volume v = iota_volume({10, 10, 10}, {1, 1, 1});
  const auto [lo, hi] = percentile_bounds(v, 0.5, 99.5);
  CHECK(lo == doctest::Approx(4.995));
  CHECK(hi == doctest::Approx(994.005));
  const Volume c = clip_percentiles(v, 0.5, 99.5);
  const auto d = c.to_doubles();
  CHECK(*std::min_element(d.begin(), d.end()) == doctest::Approx(4.995).epsilon(1e-6));
  CHECK(*std::max_element(d.begin(), d.end()) == doctest::Approx(994.005).epsilon(1e-6));
  for (std::size_t i = 5; i < 995; ++i) CHECK(d[i] == double(i));
  CHECK(clip_percentiles(v, 0, 100).to_doubles() == v.to_doubles());
  const Volume k = make_volume({2, 2, 2}, {1, 1, 1}, {0, 0, 0}, ElementKind::kFloat32,
                               std::vector<double>(8, 3.0));
  CHECK(clip_percentiles(k, 0.5, 99.5).to_doubles() == k.to_doubles());
  CHECK_THROWS_AS(clip_percentiles(v, 50, 50), ConfigError);
}

TEST_CASE("zscore") {
  const Volume three =
      make_volume({3, 1, 1}, {1, 1, 1}, {0, 0, 0}, ElementKind::kFloat64, std::vector<double>{1, 2, 3});
  const auto z = zscore_normalize(three).to_doubles();
  CHECK(z[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));

  const Volume k = make_volume({2, 2, 2}, {1, 1, 1}, {0, 0, 0}, ElementKind::kInt16,
                               std::vector<double>(8, 7.0));
  for (double x : zscore_normalize(k).to_doubles()) CHECK(x == 0.0);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [m, s] = mean_std(zscore_normalize(random_volume(rng, 300.0, -1000.0)));
    CHECK(std::fabs(m) < 1e-6);
    CHECK(std::fabs(s - 1.0) < 1e-4);
  }
}

TEST_CASE("preprocess pipeline") {
  const Volume v = iota_volume({10, 10, 10}, {1, 1, 1});
  const Volume out = preprocess(v, PreprocessConfig::ct(), false);
  const auto [m, s] = mean_std(out);
  CHECK(std::fabs(m) < 1e-6);
  CHECK(std::fabs(s - 1.0) < 1e-4);
  // Composition of the clip and z-score oracles.
  std::vector<double> clipped(1000);
  for (int i = 0; i < 1000; ++i) clipped[i] = std::clamp(double(i), 4.995, 994.005);
  double mean = 0.0;
  for (double x : clipped) mean += x;
  mean /= 1000.0;
  double var = 0.0;
  for (double x : clipped) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / 1000.0);
  const auto d = out.to_doubles();
  for (int i : {0, 3, 500, 999}) CHECK(d[i] == doctest::Approx((clipped[i] - mean) / sd).epsilon(1e-5));

  PreprocessConfig only_resample;
  only_resample.clip.reset();
  only_resample.normalize = false;
  only_resample.target_spacing = {0.5, 1, 1};
  const Volume r = preprocess(v, only_resample, false);
  CHECK(r == resample(v, {0.5, 1, 1}, Interpolation::kTrilinear));

  std::vector<double> labels(1000);
  for (int i = 0; i < 1000; ++i) labels[i] = (i / 100) % 3;
  const Volume mask = make_volume({10, 10, 10}, {1.7, 1.7, 0.6}, {0, 0, 0}, ElementKind::kUInt8, labels);
  const Volume lm = preprocess(mask, PreprocessConfig::ct(), true);
  CHECK(lm.kind() == ElementKind::kUInt8);
  for (double x : lm.to_doubles()) CHECK((x == 0 || x == 1 || x == 2));
}

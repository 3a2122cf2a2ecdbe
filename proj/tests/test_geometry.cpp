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
#include "voxeval/geometry.hpp"
#include "voxeval/labeling.hpp"

using namespace voxeval;

namespace {

oracle::IntBox random_int_box(std::mt19937_64& rng, int n) {
  oracle::IntBox b;
  for (int a = 0; a < 3; ++a) {
    const int x = int(rng() % n);
    const int y = int(rng() % n);
    b.lo[a] = std::min(x, y);
    b.hi[a] = std::max(x, y) + 1;
  }
  return b;
}

Volume mask_from(const std::vector<std::uint8_t>& fg, Shape3 shape, Vec3 spacing = {1, 1, 1},
                 Vec3 origin = {0, 0, 0}) {
  return Volume(shape, spacing, origin, Volume::Buffer(fg));
}

}  // namespace

TEST_CASE("box validation") {
  CHECK_THROWS_AS((BoundingBox3D{{0, 0, 0}, {1, 0, 1}}.validate()), ValidationError);
  CHECK_THROWS_AS((BoundingBox3D{{0, 0, 0}, {1, NAN, 1}}.validate()), ValidationError);
  CHECK((BoundingBox3D{{0, 0, 0}, {1, 1, 1}}.valid()));
}

TEST_CASE("box iou") {
  const BoundingBox3D a{{0, 0, 0}, {2, 2, 2}};
  const BoundingBox3D b{{1, 1, 1}, {3, 3, 3}};
  CHECK(box_iou(a, a) == 1.0);
  CHECK(box_iou(a, b) == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
  CHECK(box_iou(a, {{5, 5, 5}, {6, 6, 6}}) == 0.0);
  CHECK(box_iou(a, {{2, 0, 0}, {3, 2, 2}}) == 0.0);
  CHECK(box_iou(a, {{2, 2, 2}, {3, 3, 3}}) == 0.0);
  CHECK(box_volume(a) == 8.0);
  CHECK(box_intersection(a, b) == 1.0);
}

TEST_CASE("box iou equals a voxel-counting oracle") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_int_box(rng, 12);
    const auto b = random_int_box(rng, 12);
    const auto [inter, uni] = oracle::voxel_iou(a, b, 12);
    CHECK(box_iou(oracle::to_box(a), oracle::to_box(b)) ==
          doctest::Approx(double(inter) / double(uni)).epsilon(1e-12));
  }
}

TEST_CASE("iou symmetry and invariance") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-20, 20);
  std::uniform_real_distribution<double> len(0.1, 15);
  auto rbox = [&] {
    BoundingBox3D b;
    for (int i = 0; i < 3; ++i) {
      b.min[i] = u(rng);
      b.max[i] = b.min[i] + len(rng);
    }
    return b;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = rbox();
    const auto b = rbox();
    const double iou = box_iou(a, b);
    CHECK(iou >= 0.0);
    CHECK(iou <= 1.0);
    CHECK(iou == box_iou(b, a));
    const Vec3 t{u(rng), u(rng), u(rng)};
    const double s = len(rng);
    BoundingBox3D at = a, bt = b, as = a, bs = b;
    for (int i = 0; i < 3; ++i) {
      at.min[i] += t[i];
      at.max[i] += t[i];
      bt.min[i] += t[i];
      bt.max[i] += t[i];
      as.min[i] *= s;
      as.max[i] *= s;
      bs.min[i] *= s;
      bs.max[i] *= s;
    }
    CHECK(box_iou(at, bt) == doctest::Approx(iou).epsilon(1e-9));
    CHECK(box_iou(as, bs) == doctest::Approx(iou).epsilon(1e-9));
  }
}

TEST_CASE("box center") {
  CHECK(box_center({{0, 0, 0}, {2, 2, 2}}) == Vec3{1, 1, 1});
  CHECK(box_center({{-1, 0, 2}, {1, 4, 3}}) == Vec3{0, 2, 2.5});
  const BoundingBox3D b{{1.5, -2, 4}, {3, 5, 9}};
  const Vec3 t{10, -3, 0.25};
  const BoundingBox3D bt{{b.min[0] + t[0], b.min[1] + t[1], b.min[2] + t[2]},
                         {b.max[0] + t[0], b.max[1] + t[1], b.max[2] + t[2]}};
  const Vec3 c = box_center(bt);
  for (int i = 0; i < 3; ++i) CHECK(c[i] - t[i] == doctest::Approx(box_center(b)[i]));
  CHECK(box_max_edge(b) == 7.0);
}

TEST_CASE("ground truth object") {
  const auto g = GroundTruthObject::from_box("a", 1, {{0, 0, 0}, {2, 4, 6}});
  CHECK(g.center == Vec3{1, 2, 3});
  CHECK(g.effective_diameter() == 6.0);
  auto h = g;
  h.diameter = -1.0;
  CHECK_THROWS_AS(h.validate(), ValidationError);
}

TEST_CASE("connected components: basic cases") {
  std::vector<std::uint8_t> fg(27, 0);
  fg[13] = 1;
  auto imap = connected_components(mask_from(fg, {3, 3, 3}), 1);
  CHECK(imap.count == 1);
  fg.assign(27, 0);
  fg[0] = 1;   // (0,0,0)
  fg[13] = 1;  // (1,1,1)
  CHECK(connected_components(mask_from(fg, {3, 3, 3}), 1, Connectivity::k26).count == 1);
  CHECK(connected_components(mask_from(fg, {3, 3, 3}), 1, Connectivity::k18).count == 2);
  CHECK(connected_components(mask_from(fg, {3, 3, 3}), 1, Connectivity::k6).count == 2);
  fg.assign(27, 0);
  fg[0] = 1;  // (0,0,0)
  fg[4] = 1;  // (1,1,0): edge neighbor
  CHECK(connected_components(mask_from(fg, {3, 3, 3}), 1, Connectivity::k18).count == 1);
  CHECK(connected_components(mask_from(fg, {3, 3, 3}), 1, Connectivity::k6).count == 2);
  CHECK(connected_components(mask_from(std::vector<std::uint8_t>(27, 0), {3, 3, 3}), 1).count == 0);
  CHECK_THROWS_AS(connectivity_from_int(8), ConfigError);
  CHECK(connectivity_from_int(18) == Connectivity::k18);
}

TEST_CASE("connected components equal flood fill on random masks") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const int nx = 1 + int(rng() % 16), ny = 1 + int(rng() % 16), nz = 1 + int(rng() % 16);
    const double density = 0.2 + 0.4 * double(rng() % 100) / 100.0;
    std::vector<std::uint8_t> fg(nx * ny * nz);
    std::vector<std::uint8_t> values(fg.size());
    for (std::size_t i = 0; i < fg.size(); ++i) {
      const bool on = double(rng() % 1000) / 1000.0 < density;
      fg[i] = on;
      values[i] = on ? 2 : std::uint8_t(rng() % 2);  // 0/1 background, 2 foreground
    }
    const Volume mask = mask_from(values, {std::size_t(nx), std::size_t(ny), std::size_t(nz)});
    for (int c : {6, 18, 26}) {
      const auto ref = oracle::flood_fill(fg, nx, ny, nz, c);
      const auto imap = connected_components(mask, 2, connectivity_from_int(c));
      CHECK(oracle::same_partition(imap.labels, ref));
      CHECK(imap.labels == ref);  // same first-voxel numbering
      CHECK(imap.count == *std::max_element(ref.begin(), ref.end()));
    }
  }
}

TEST_CASE("several foreground values form one class") {
  std::vector<std::uint8_t> v{1, 2, 0, 3};
  const Volume mask = mask_from(v, {4, 1, 1});
  const int vals[] = {1, 2};
  CHECK(connected_components(mask, vals).count == 1);
  const int three[] = {3};
  CHECK(connected_components(mask, three).count == 1);
}

TEST_CASE("instances to objects") {
  std::vector<std::uint8_t> fg(10 * 10 * 10, 0);
  fg[3 + 10 * (4 + 10 * 5)] = 1;
  auto objs = instances_to_objects(connected_components(mask_from(fg, {10, 10, 10}), 1), 0, "x");
  REQUIRE(objs.size() == 1);
  CHECK(objs[0].box == BoundingBox3D{{3, 4, 5}, {4, 5, 6}});
  CHECK(objs[0].diameter == 1.0);
  CHECK(objs[0].image_id == "x");

  std::vector<std::uint8_t> block(4 * 4 * 4, 0);
  for (int z = 1; z < 3; ++z)
    for (int y = 1; y < 3; ++y)
      for (int x = 1; x < 3; ++x) block[x + 4 * (y + 4 * z)] = 1;
  objs = instances_to_objects(
      connected_components(mask_from(block, {4, 4, 4}, {2, 2, 2}, {10, 0, -4}), 1), 3);
  REQUIRE(objs.size() == 1);
  CHECK(objs[0].box == BoundingBox3D{{12, 2, -2}, {16, 6, 2}});
  CHECK(objs[0].diameter == 4.0);
  CHECK(objs[0].class_id == 3);
}

TEST_CASE("object boxes equal an exhaustive scan") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 12;
    std::vector<std::uint8_t> fg(n * n * n);
    for (auto& x : fg) x = rng() % 5 == 0;
    const Vec3 sp{0.5, 1.5, 2.0};
    const Vec3 org{-3, 1, 2};
    const auto imap = connected_components(mask_from(fg, {12, 12, 12}, sp, org), 1);
    const auto objs = instances_to_objects(imap, 0);
    REQUIRE(objs.size() == imap.count);
    std::vector<std::array<int, 6>> bounds(imap.count, {n, n, n, -1, -1, -1});
    for (int z = 0; z < n; ++z)
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
          const auto id = imap.labels[x + n * (y + n * z)];
          if (id == 0) continue;
          auto& b = bounds[id - 1];
          const int p[3] = {x, y, z};
          for (int a = 0; a < 3; ++a) {
            b[a] = std::min(b[a], p[a]);
            b[3 + a] = std::max(b[3 + a], p[a]);
          }
          // Every foreground voxel center lies in its object's box.
          const auto& box = objs[id - 1].box;
          for (int a = 0; a < 3; ++a) {
            const double c = (p[a] + 0.5) * sp[a] + org[a];
            CHECK(c > box.min[a]);
            CHECK(c < box.max[a]);
          }
        }
    for (std::size_t k = 0; k < imap.count; ++k) {
      for (int a = 0; a < 3; ++a) {
        CHECK(objs[k].box.min[a] == doctest::Approx(bounds[k][a] * sp[a] + org[a]));
        CHECK(objs[k].box.max[a] == doctest::Approx((bounds[k][3 + a] + 1) * sp[a] + org[a]));
      }
    }
  }
}

TEST_CASE("extract objects labels each class independently") {
  // Two touching voxels of different classes stay separate objects.
  std::vector<std::uint8_t> v{1, 2, 0, 1, 0, 0, 0, 0};
  const Volume mask = mask_from(v, {8, 1, 1});
  const auto objs = extract_objects(mask, {{1, 0}, {2, 1}}, "img");
  REQUIRE(objs.size() == 3);
  CHECK(objs[0].class_id == 0);
  CHECK(objs[0].box.min[0] == 0);
  CHECK(objs[1].class_id == 0);
  CHECK(objs[1].box.min[0] == 3);
  CHECK(objs[2].class_id == 1);
  CHECK(objs[2].image_id == "img");
  // Labels mapping to one class merge.
  CHECK(extract_objects(mask, {{1, 0}, {2, 0}}, "img").size() == 2);
}

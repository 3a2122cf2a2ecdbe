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
#include "voxeval/labeling.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "voxeval/error.hpp"

namespace voxeval {

namespace {

struct Offset {
  int dx, dy, dz;
};

// Neighbors already visited in raster order.
std::vector<Offset> backward_neighbors(Connectivity connectivity) {
  const int max_nonzero = connectivity == Connectivity::k6    ? 1
                          : connectivity == Connectivity::k18 ? 2
                                                              : 3;
  std::vector<Offset> out;
  for (int dz = -1; dz <= 0; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const bool before = dz < 0 || (dz == 0 && dy < 0) || (dz == 0 && dy == 0 && dx < 0);
        if (!before) continue;
        const int nonzero = (dx != 0) + (dy != 0) + (dz != 0);
        if (nonzero <= max_nonzero) out.push_back({dx, dy, dz});
      }
    }
  }
  return out;
}

class DisjointSet {
 public:
  DisjointSet() : parent_{0} {}

  std::uint32_t make() {
    const auto id = static_cast<std::uint32_t>(parent_.size());
    parent_.push_back(id);
    return id;
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller id stays root, so a root is always its set's first label.
  std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

template <typename T>
void label_pass(std::span<const T> data, const Shape3& shape,
                std::span<const int> foreground_values, Connectivity connectivity,
                std::vector<std::uint32_t>& labels, DisjointSet& sets) {
  const std::vector<Offset> offsets = backward_neighbors(connectivity);
  const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(shape[0]);
  const std::ptrdiff_t sxy = sx * static_cast<std::ptrdiff_t>(shape[1]);
  std::vector<std::ptrdiff_t> deltas;
  for (const Offset& o : offsets) deltas.push_back(o.dx + o.dy * sx + o.dz * sxy);

  auto is_fg = [&](T v) {
    for (int f : foreground_values) {
      if (static_cast<double>(v) == static_cast<double>(f)) return true;
    }
    return false;
  };

  std::size_t i = 0;
  for (std::size_t z = 0; z < shape[2]; ++z) {
    for (std::size_t y = 0; y < shape[1]; ++y) {
      const bool interior_yz = z > 0 && y > 0 && y + 1 < shape[1];
      for (std::size_t x = 0; x < shape[0]; ++x, ++i) {
        if (!is_fg(data[i])) continue;
        const bool interior = interior_yz && x > 0 && x + 1 < shape[0];
        std::uint32_t current = 0;
        for (std::size_t k = 0; k < offsets.size(); ++k) {
          if (!interior) {
            const Offset& o = offsets[k];
            if ((o.dx < 0 && x == 0) || (o.dx > 0 && x + 1 == shape[0]) ||
                (o.dy < 0 && y == 0) || (o.dy > 0 && y + 1 == shape[1]) ||
                (o.dz < 0 && z == 0)) {
              continue;
            }
          }
          const std::uint32_t neighbor =
              labels[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + deltas[k])];
          if (neighbor == 0) continue;
          current = current == 0 ? neighbor : sets.unite(current, neighbor);
        }
        if (current == 0) {
          if (sets.size() > std::numeric_limits<std::uint32_t>::max() - 1) {
            throw ValidationError("too many provisional labels");
          }
          current = sets.make();
        }
        labels[i] = current;
      }
    }
  }
}

}  // namespace

Connectivity connectivity_from_int(int value) {
  switch (value) {
    case 6: return Connectivity::k6;
    case 18: return Connectivity::k18;
    case 26: return Connectivity::k26;
    default:
      throw ConfigError("connectivity must be 6, 18 or 26, got " + std::to_string(value));
  }
}

InstanceMap connected_components(const Volume& mask, std::span<const int> foreground_values,
                                 Connectivity connectivity) {
  InstanceMap imap;
  imap.shape = mask.shape();
  imap.spacing = mask.spacing();
  imap.origin = mask.origin();
  imap.connectivity = connectivity;
  imap.labels.assign(mask.size(), 0);

  DisjointSet sets;
  std::visit(
      [&](const auto& data) {
        using T = typename std::decay_t<decltype(data)>::value_type;
        label_pass<T>(std::span<const T>(data), mask.shape(), foreground_values,
                      connectivity, imap.labels, sets);
      },
      mask.buffer());

  // Roots are visited in creation order, i.e. in order of each component's
  // first voxel.
  std::vector<std::uint32_t> final_id(sets.size(), 0);
  std::uint32_t next = 1;
  for (std::uint32_t l = 1; l < sets.size(); ++l) {
    const std::uint32_t root = sets.find(l);
    if (root == l) final_id[l] = next++;
    final_id[l] = final_id[root];
  }
  imap.count = next - 1;
  for (auto& l : imap.labels) {
    if (l != 0) l = final_id[l];
  }
  return imap;
}

std::vector<GroundTruthObject> instances_to_objects(const InstanceMap& imap, int class_id,
                                                    const std::string& image_id) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::array<std::size_t, 3>> lo(imap.count, {kNone, kNone, kNone});
  std::vector<std::array<std::size_t, 3>> hi(imap.count, {0, 0, 0});

  std::size_t i = 0;
  for (std::size_t z = 0; z < imap.shape[2]; ++z) {
    for (std::size_t y = 0; y < imap.shape[1]; ++y) {
      for (std::size_t x = 0; x < imap.shape[0]; ++x, ++i) {
        const std::uint32_t l = imap.labels[i];
        if (l == 0) continue;
        auto& a = lo[l - 1];
        auto& b = hi[l - 1];
        a[0] = std::min(a[0], x);
        a[1] = std::min(a[1], y);
        a[2] = std::min(a[2], z);
        b[0] = std::max(b[0], x);
        b[1] = std::max(b[1], y);
        b[2] = std::max(b[2], z);
      }
    }
  }

  std::vector<GroundTruthObject> objects;
  objects.reserve(imap.count);
  for (std::size_t k = 0; k < imap.count; ++k) {
    BoundingBox3D box;
    for (int a = 0; a < 3; ++a) {
      box.min[a] = static_cast<double>(lo[k][a]) * imap.spacing[a] + imap.origin[a];
      box.max[a] = static_cast<double>(hi[k][a] + 1) * imap.spacing[a] + imap.origin[a];
    }
    objects.push_back(
        GroundTruthObject::from_box(image_id, class_id, box, box_max_edge(box)));
  }
  return objects;
}

std::vector<GroundTruthObject> extract_objects(const Volume& mask,
                                               const std::map<int, int>& class_of_label,
                                               const std::string& image_id,
                                               Connectivity connectivity) {
  std::map<int, std::vector<int>> labels_of_class;
  for (const auto& [label, cls] : class_of_label) {
    if (label == 0) throw ValidationError("mask label 0 is background");
    labels_of_class[cls].push_back(label);
  }
  std::vector<GroundTruthObject> out;
  for (const auto& [cls, labels] : labels_of_class) {
    const InstanceMap imap = connected_components(mask, labels, connectivity);
    auto objects = instances_to_objects(imap, cls, image_id);
    out.insert(out.end(), std::make_move_iterator(objects.begin()),
               std::make_move_iterator(objects.end()));
  }
  return out;
}

}  // namespace voxeval

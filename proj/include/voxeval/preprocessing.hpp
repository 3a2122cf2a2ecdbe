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

#ifndef VOXEVAL_PREPROCESSING_HPP_
#define VOXEVAL_PREPROCESSING_HPP_

#include <optional>
#include <utility>

#include "voxeval/volume.hpp"

namespace voxeval {

enum class Interpolation { kTrilinear, kNearest };

inline constexpr Vec3 kDefaultTargetSpacing{1.0, 1.0, 1.0};
inline constexpr double kCtClipLowPercentile = 0.5;
inline constexpr double kCtClipHighPercentile = 99.5;
inline constexpr double kZscoreEpsilon = 1e-8;

struct PercentileRange {
  double lo = kCtClipLowPercentile;
  double hi = kCtClipHighPercentile;
};

struct PreprocessConfig {
  Vec3 target_spacing = kDefaultTargetSpacing;
  Interpolation image_interpolation = Interpolation::kTrilinear;
  std::optional<PercentileRange> clip = PercentileRange{};
  bool normalize = true;

  // CT: 1 mm isotropic, clip to the 0.5/99.5 percentiles, z-score.
  static PreprocessConfig ct() { return {}; }
  // MRI: same, without percentile clipping.
  static PreprocessConfig mri() {
    PreprocessConfig c;
    c.clip.reset();
    return c;
  }

  // Throws ConfigError on non-positive spacing or an invalid percentile pair.
  void validate() const;
};

// Output shape per axis: round(shape * spacing / target), at least 1, with
// round-half-away-from-zero.
Shape3 resampled_shape(const Shape3& shape, const Vec3& spacing, const Vec3& target);

// Resamples onto a grid with `target_spacing`, keeping the origin. Output voxel
// centers map to input coordinates through (i_out + 0.5) * s_out =
// (i_in + 0.5) * s_in with clamp-to-edge. Trilinear output is float32 (float64
// for float64 input); nearest keeps the element kind. When the target equals
// the input spacing the volume is returned unchanged.
Volume resample(const Volume& volume, const Vec3& target_spacing,
                Interpolation interpolation, std::size_t threads = 1);

// Percentile with linear interpolation between zero-based order statistics.
double percentile(std::span<const double> values, double p);

// (P_lo, P_hi) over all voxels.
std::pair<double, double> percentile_bounds(const Volume& volume, double lo, double hi);

// Clamps every voxel into [P_lo, P_hi]. Output is float32 (float64 for float64
// input).
Volume clip_percentiles(const Volume& volume, double lo, double hi);

// (x - mean) / max(std, eps) with the population standard deviation.
Volume zscore_normalize(const Volume& volume);

// resample -> clip -> z-score. Label maps use nearest interpolation and skip
// both intensity steps.
Volume preprocess(const Volume& volume, const PreprocessConfig& config, bool is_label,
                  std::size_t threads = 1);

}  // namespace voxeval

#endif  // VOXEVAL_PREPROCESSING_HPP_

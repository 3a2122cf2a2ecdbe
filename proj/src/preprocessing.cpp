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
#include "voxeval/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "voxeval/error.hpp"
#include "voxeval/parallel.hpp"

namespace voxeval {

namespace {

bool is_float64(const Volume& v) { return v.kind() == ElementKind::kFloat64; }

// Same kind for float64 input, float32 otherwise.
Volume float_volume(const Volume& like, Shape3 shape, Vec3 spacing,
                    std::vector<double>&& values) {
  if (is_float64(like)) return Volume(shape, spacing, like.origin(), std::move(values));
  std::vector<float> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<float>(values[i]);
  return Volume(shape, spacing, like.origin(), std::move(out));
}

struct LinearTap {
  std::size_t lo;
  std::size_t hi;
  double w;  // weight of hi
};

std::vector<LinearTap> linear_taps(std::size_t n_out, double s_out, std::size_t n_in,
                                   double s_in) {
  std::vector<LinearTap> taps(n_out);
  const double max_index = static_cast<double>(n_in - 1);
  for (std::size_t i = 0; i < n_out; ++i) {
    double x = (static_cast<double>(i) + 0.5) * s_out / s_in - 0.5;
    x = std::clamp(x, 0.0, max_index);
    const double fl = std::floor(x);
    const auto lo = static_cast<std::size_t>(fl);
    taps[i] = {lo, std::min(lo + 1, n_in - 1), x - fl};
  }
  return taps;
}

std::vector<std::size_t> nearest_taps(std::size_t n_out, double s_out, std::size_t n_in,
                                      double s_in) {
  std::vector<std::size_t> taps(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double x = std::floor((static_cast<double>(i) + 0.5) * s_out / s_in);
    taps[i] = static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(n_in - 1)));
  }
  return taps;
}

template <typename T>
std::vector<T> resample_nearest(std::span<const T> in, const Shape3& in_shape,
                                const Shape3& out_shape,
                                const std::array<std::vector<std::size_t>, 3>& taps,
                                std::size_t threads) {
  std::vector<T> out(voxel_count(out_shape));
  parallel_for(out_shape[2], threads, [&](std::size_t z) {
    const std::size_t zi = taps[2][z];
    for (std::size_t y = 0; y < out_shape[1]; ++y) {
      const std::size_t row_in = in_shape[0] * (taps[1][y] + in_shape[1] * zi);
      T* row_out = out.data() + out_shape[0] * (y + out_shape[1] * z);
      for (std::size_t x = 0; x < out_shape[0]; ++x) row_out[x] = in[row_in + taps[0][x]];
    }
  });
  return out;
}

template <typename T>
std::vector<double> resample_trilinear(std::span<const T> in, const Shape3& in_shape,
                                       const Shape3& out_shape,
                                       const std::array<std::vector<LinearTap>, 3>& taps,
                                       std::size_t threads) {
  std::vector<double> out(voxel_count(out_shape));
  const std::size_t nx = in_shape[0];
  const std::size_t nxy = in_shape[0] * in_shape[1];
  parallel_for(out_shape[2], threads, [&](std::size_t z) {
    const LinearTap& tz = taps[2][z];
    for (std::size_t y = 0; y < out_shape[1]; ++y) {
      const LinearTap& ty = taps[1][y];
      const std::size_t r00 = ty.lo * nx + tz.lo * nxy;
      const std::size_t r10 = ty.hi * nx + tz.lo * nxy;
      const std::size_t r01 = ty.lo * nx + tz.hi * nxy;
      const std::size_t r11 = ty.hi * nx + tz.hi * nxy;
      double* row_out = out.data() + out_shape[0] * (y + out_shape[1] * z);
      for (std::size_t x = 0; x < out_shape[0]; ++x) {
        const LinearTap& tx = taps[0][x];
        auto lerp_x = [&](std::size_t row) {
          const double a = static_cast<double>(in[row + tx.lo]);
          const double b = static_cast<double>(in[row + tx.hi]);
          return a + tx.w * (b - a);
        };
        const double c0 = lerp_x(r00) + ty.w * (lerp_x(r10) - lerp_x(r00));
        const double c1 = lerp_x(r01) + ty.w * (lerp_x(r11) - lerp_x(r01));
        row_out[x] = c0 + tz.w * (c1 - c0);
      }
    }
  });
  return out;
}

}  // namespace

void PreprocessConfig::validate() const {
  for (double s : target_spacing) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("target spacing components must be positive");
    }
  }
  if (clip) {
    if (!(clip->lo >= 0.0 && clip->hi <= 100.0 && clip->lo < clip->hi)) {
      throw ConfigError("clip percentiles must satisfy 0 <= lo < hi <= 100");
    }
  }
}

Shape3 resampled_shape(const Shape3& shape, const Vec3& spacing, const Vec3& target) {
  Shape3 out{};
  for (int a = 0; a < 3; ++a) {
    const double n = std::round(static_cast<double>(shape[a]) * spacing[a] / target[a]);
    out[a] = std::max<std::size_t>(1, static_cast<std::size_t>(n));
  }
  return out;
}

Volume resample(const Volume& volume, const Vec3& target_spacing,
                Interpolation interpolation, std::size_t threads) {
  for (double s : target_spacing) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("target spacing components must be positive");
    }
  }
  if (target_spacing == volume.spacing()) return volume;

  const Shape3& in_shape = volume.shape();
  const Shape3 out_shape = resampled_shape(in_shape, volume.spacing(), target_spacing);

  if (interpolation == Interpolation::kNearest) {
    std::array<std::vector<std::size_t>, 3> taps;
    for (int a = 0; a < 3; ++a) {
      taps[a] = nearest_taps(out_shape[a], target_spacing[a], in_shape[a],
                             volume.spacing()[a]);
    }
    return std::visit(
        [&](const auto& data) {
          using T = typename std::decay_t<decltype(data)>::value_type;
          return Volume(out_shape, target_spacing, volume.origin(),
                        resample_nearest<T>(data, in_shape, out_shape, taps, threads));
        },
        volume.buffer());
  }

  std::array<std::vector<LinearTap>, 3> taps;
  for (int a = 0; a < 3; ++a) {
    taps[a] = linear_taps(out_shape[a], target_spacing[a], in_shape[a],
                          volume.spacing()[a]);
  }
  std::vector<double> values = std::visit(
      [&](const auto& data) {
        using T = typename std::decay_t<decltype(data)>::value_type;
        return resample_trilinear<T>(data, in_shape, out_shape, taps, threads);
      },
      volume.buffer());
  return float_volume(volume, out_shape, target_spacing, std::move(values));
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw ValidationError("percentile of an empty volume");
  std::vector<double> v(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const double frac = rank - static_cast<double>(lo);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  if (frac == 0.0 || lo + 1 >= v.size()) return a;
  const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
  return a + frac * (b - a);
}

std::pair<double, double> percentile_bounds(const Volume& volume, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 100.0 && lo < hi)) {
    throw ConfigError("clip percentiles must satisfy 0 <= lo < hi <= 100");
  }
  const std::vector<double> values = volume.to_doubles();
  return {percentile(values, lo), percentile(values, hi)};
}

Volume clip_percentiles(const Volume& volume, double lo, double hi) {
  const auto [p_lo, p_hi] = percentile_bounds(volume, lo, hi);
  std::vector<double> values = volume.to_doubles();
  for (double& v : values) v = std::clamp(v, p_lo, p_hi);
  return float_volume(volume, volume.shape(), volume.spacing(), std::move(values));
}

Volume zscore_normalize(const Volume& volume) {
  std::vector<double> values = volume.to_doubles();
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double denom = std::max(std::sqrt(ss / n), kZscoreEpsilon);
  for (double& v : values) v = (v - mean) / denom;
  return float_volume(volume, volume.shape(), volume.spacing(), std::move(values));
}

Volume preprocess(const Volume& volume, const PreprocessConfig& config, bool is_label,
                  std::size_t threads) {
  config.validate();
  if (is_label) {
    return resample(volume, config.target_spacing, Interpolation::kNearest, threads);
  }
  Volume out = resample(volume, config.target_spacing, config.image_interpolation, threads);
  if (config.clip) out = clip_percentiles(out, config.clip->lo, config.clip->hi);
  if (config.normalize) out = zscore_normalize(out);
  return out;
}

}  // namespace voxeval

// Copyright 2026 The fairdl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairdl/samplegen/augment.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"

namespace fairdl {
namespace {

void TransformImage(std::span<const double> in, std::span<double> out,
                    size_t side, double degrees, double shift_x,
                    double shift_y) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double center = (static_cast<double>(side) - 1) / 2;
  const long limit = static_cast<long>(side);
  for (size_t y = 0; y < side; ++y) {
    for (size_t x = 0; x < side; ++x) {
      // Inverse map from output pixel to source pixel.
      const double dx = static_cast<double>(x) - shift_x - center;
      const double dy = static_cast<double>(y) - shift_y - center;
      const long sx = std::lround(cos_t * dx + sin_t * dy + center);
      const long sy = std::lround(-sin_t * dx + cos_t * dy + center);
      out[y * side + x] = (sx >= 0 && sx < limit && sy >= 0 && sy < limit)
                              ? in[static_cast<size_t>(sy) * side +
                                   static_cast<size_t>(sx)]
                              : 0.0;
    }
  }
}

}  // namespace

absl::StatusOr<Dataset> Augment(const Dataset& data, const AugmentConfig& cfg,
                                Rng& rng) {
  if (cfg.replication < 1) {
    return absl::InvalidArgumentError("replication must be >= 1");
  }
  if (cfg.rotation_range < 0 || cfg.shift_range < 0) {
    return absl::InvalidArgumentError("augmentation ranges must be >= 0");
  }
  const size_t dim = data.dim();
  size_t side = 0;
  if (cfg.kind == AugmentKind::kImage) {
    side = static_cast<size_t>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (side * side != dim) {
      return absl::InvalidArgumentError(
          absl::StrFormat("image mode needs square rows, got dim %d", dim));
    }
  }
  Dataset out;
  out.num_classes = data.num_classes;
  out.features = Matrix(data.size() * cfg.replication, dim);
  out.labels.reserve(data.size() * cfg.replication);
  size_t row = 0;
  for (size_t copy = 0; copy < cfg.replication; ++copy) {
    for (size_t i = 0; i < data.size(); ++i, ++row) {
      out.labels.push_back(data.labels[i]);
      std::span<const double> src = data.features.row(i);
      std::span<double> dst = out.features.row(row);
      if (cfg.kind == AugmentKind::kTabular) {
        std::copy(src.begin(), src.end(), dst.begin());
        continue;
      }
      const double degrees =
          cfg.rotation_range > 0
              ? rng.Uniform(-cfg.rotation_range, cfg.rotation_range)
              : 0.0;
      const double max_shift = cfg.shift_range * static_cast<double>(side);
      const double sx = max_shift > 0 ? rng.Uniform(-max_shift, max_shift) : 0.0;
      const double sy = max_shift > 0 ? rng.Uniform(-max_shift, max_shift) : 0.0;
      TransformImage(src, dst, side, degrees, sx, sy);
    }
  }
  return out;
}

}  // namespace fairdl

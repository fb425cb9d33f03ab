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

#ifndef FAIRDL_SAMPLEGEN_AUGMENT_H_
#define FAIRDL_SAMPLEGEN_AUGMENT_H_

#include <cstddef>

#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/numerics/dataset.h"

namespace fairdl {

enum class AugmentKind { kImage, kTabular };

struct AugmentConfig {
  AugmentKind kind = AugmentKind::kTabular;
  // Maximum absolute rotation in degrees (image mode).
  double rotation_range = 0;
  // Maximum absolute shift as a fraction of the image side (image mode).
  double shift_range = 0;
  size_t replication = 1;

  bool operator==(const AugmentConfig&) const = default;
};

// Returns `replication` copies of `data`, copy-major: rows [k*n, (k+1)*n)
// hold copy k. Image mode expects square single-channel rows and applies an
// independent random rotation and shift to every copy, resampling with the
// nearest neighbour and filling uncovered pixels with 0.
absl::StatusOr<Dataset> Augment(const Dataset& data, const AugmentConfig& cfg,
                                Rng& rng);

}  // namespace fairdl

#endif  // FAIRDL_SAMPLEGEN_AUGMENT_H_

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

#ifndef FAIRDL_ADVERSARY_ADVERSARY_H_
#define FAIRDL_ADVERSARY_ADVERSARY_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/events.h"
#include "fairdl/common/rng.h"
#include "fairdl/common/types.h"
#include "fairdl/numerics/dataset.h"
#include "fairdl/numerics/mlp.h"
#include "fairdl/samplegen/release.h"

namespace fairdl {

enum class AdversaryKind {
  kFreeRiderRandomLabel,
  kFreeRiderRandomGrad,
  kFreeRiderCraftedGrad,
  kGanAttacker,
};

std::string_view AdversaryKindName(AdversaryKind kind);
absl::StatusOr<AdversaryKind> ParseAdversaryKind(std::string_view name);

struct AdversaryConfig {
  PartyId party = 0;
  AdversaryKind kind = AdversaryKind::kFreeRiderRandomLabel;
  // Std of random gradients, or of the noise added to an echo.
  double scale = 1.0;
  // GAN attacker: classes owned by the adversary; every other class belongs
  // to the victims. Ignored when `non_iid` is false (control runs).
  std::vector<int> adversary_classes = {5, 6, 7, 8, 9};
  bool non_iid = true;

  bool IsFreeRider() const { return kind != AdversaryKind::kGanAttacker; }
  bool operator==(const AdversaryConfig&) const = default;
};

// Uniform random class per released sample.
std::vector<int> FreeriderLabels(const SampleRelease& release, int num_classes,
                                 Rng& rng);

// Random kinds draw N(0, scale^2) per coordinate. The crafted kind re-emits
// `echo_source` (the last aggregate it received) plus N(0, scale^2) noise,
// falling back to zeros before anything was received.
DenseGradient FreeriderGradients(AdversaryKind kind, size_t param_count,
                                 double scale, const DenseGradient* echo_source,
                                 Rng& rng);

struct GanPartition {
  Dataset adversary;
  std::vector<Dataset> victims;
};

// Draws `per_party` examples for the adversary from its own classes and for
// each victim from the remaining classes, without replacement from `pool`.
absl::StatusOr<GanPartition> GanAttackerSetup(const Dataset& pool,
                                              std::span<const int> adversary_classes,
                                              size_t victims, size_t per_party,
                                              Rng& rng);

enum class DetectionStage { kInit, kUpdate, kNever };
std::string_view DetectionStageName(DetectionStage stage);

struct Detection {
  PartyId party = 0;
  AdversaryKind kind = AdversaryKind::kFreeRiderRandomLabel;
  bool detected = false;
  DetectionStage stage = DetectionStage::kNever;
  // -1 when never detected.
  int round = -1;
  bool operator==(const Detection&) const = default;
};

// First exclusion or token exhaustion of each adversary. An exclusion at
// round 0 is an initialisation-stage detection.
std::vector<Detection> DetectionReport(std::span<const AdversaryConfig> adversaries,
                                       std::span<const RunEvent> events);

}  // namespace fairdl

#endif  // FAIRDL_ADVERSARY_ADVERSARY_H_

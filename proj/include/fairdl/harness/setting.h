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

#ifndef FAIRDL_HARNESS_SETTING_H_
#define FAIRDL_HARNESS_SETTING_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/numerics/dataset.h"
#include "fairdl/protocol/config.h"
#include "fairdl/protocol/party.h"

namespace fairdl {

struct SettingSpec {
  int setting = 1;
  size_t parties = 0;
  std::vector<size_t> sizes;
  std::vector<double> sharing_levels;
  bool operator==(const SettingSpec&) const = default;
};

// Sizes and sharing levels for the configured setting:
//   1: equal sizes, lambda for everyone;
//   2: equal sizes, lambda_i ~ U[lambda_low, lambda_high];
//   3: min_party_size each plus a Dirichlet(alpha) share of the rest, lambda
//      for everyone.
// The total is parties * examples_per_party in every setting.
absl::StatusOr<SettingSpec> BuildSettingSpec(const PartitionConfig& partition,
                                             Rng& rng);

// Largest-remainder rounding of `total * weights` (weights need not be
// normalized); ties go to the lower index.
std::vector<size_t> ApportionCounts(size_t total, const std::vector<double>& weights);

// Everything one (setting, seed) cell needs: party inputs and a common test set.
struct CellData {
  SettingSpec spec;
  std::vector<PartyInput> parties;
  Dataset test;
};

absl::StatusOr<CellData> BuildCell(const ExperimentConfig& config, uint64_t seed);

}  // namespace fairdl

#endif  // FAIRDL_HARNESS_SETTING_H_

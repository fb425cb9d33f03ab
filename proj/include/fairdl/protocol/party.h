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

#ifndef FAIRDL_PROTOCOL_PARTY_H_
#define FAIRDL_PROTOCOL_PARTY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/adversary/adversary.h"
#include "fairdl/common/rng.h"
#include "fairdl/common/types.h"
#include "fairdl/credibility/credibility.h"
#include "fairdl/ledger/crypto.h"
#include "fairdl/numerics/dataset.h"
#include "fairdl/numerics/mlp.h"
#include "fairdl/privacy/accountant.h"
#include "fairdl/protocol/config.h"

namespace fairdl {

// What a party brings to a run: its raw local data and sharing level.
struct PartyInput {
  Dataset data;
  double sharing_level = 0.1;
  std::optional<AdversaryConfig> adversary;
  double latency = 0;
};

// Independent random streams per party, all derived from the master seed.
enum PartyStream : uint64_t {
  kStreamSplit = 1,
  kStreamAugment = 2,
  kStreamPretrain = 3,
  kStreamRelease = 4,
  kStreamLabels = 5,
  kStreamDpSgd = 6,
  kStreamKeys = 7,
  kStreamEnvelope = 8,
  kStreamAdversary = 9,
  kStreamLocal = 10,
};

// Seed tag for the shared initial parameters w_0.
inline constexpr uint64_t kStreamCommonInit = 0xc0ffee;

struct Party {
  PartyId id = 0;
  Dataset train;
  Dataset validation;
  // Replicated train set used for DP-SGD; its size is the N of the lot ratio.
  Dataset augmented;
  double sharing_level = 0.1;
  std::optional<AdversaryConfig> adversary;
  double latency = 0;

  MlpModel model;
  uint64_t sgd_step = 0;
  // Test accuracy right after pretraining.
  double standalone_accuracy = 0;

  CredibilityList credibility;
  std::optional<PrivacyAccountant> init_accountant;
  std::optional<PrivacyAccountant> update_accountant;
  KeyPair keys;

  bool departed = false;
  bool privacy_exhausted = false;
  bool tokens_exhausted = false;
  // Last aggregate bought from peers, echoed by crafted-gradient free-riders.
  DenseGradient last_received;

  Rng release_rng{0};
  Rng label_rng{0};
  Rng dp_rng{0};
  Rng envelope_rng{0};
  Rng adversary_rng{0};
  Rng local_rng{0};

  bool IsFreeRider() const { return adversary && adversary->IsFreeRider(); }
};

// Layer widths of the model for a task.
std::vector<size_t> ModelDims(const TrainingConfig& training, size_t input_dim,
                              int num_classes);

// Common initial parameters shared by every party and baseline.
absl::StatusOr<MlpModel> CommonInit(const TrainingConfig& training,
                                    size_t input_dim, int num_classes,
                                    uint64_t seed);

// Splits, augments and keys a party. The model is a copy of `w0`.
absl::StatusOr<Party> PrepareParty(PartyId id, PartyInput input,
                                   const ExperimentConfig& config,
                                   const MlpModel& w0, uint64_t seed);

// Non-private local training on the raw train split, then records the
// standalone test accuracy.
absl::Status Pretrain(Party& party, const ExperimentConfig& config,
                      const Dataset& test, uint64_t seed);

}  // namespace fairdl

#endif  // FAIRDL_PROTOCOL_PARTY_H_

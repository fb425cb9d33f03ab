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

#include "fairdl/protocol/party.h"

#include <utility>

#include "fairdl/samplegen/augment.h"

namespace fairdl {

std::vector<size_t> ModelDims(const TrainingConfig& training, size_t input_dim,
                              int num_classes) {
  std::vector<size_t> dims = {input_dim};
  for (int h : training.hidden) dims.push_back(static_cast<size_t>(h));
  dims.push_back(static_cast<size_t>(num_classes));
  return dims;
}

absl::StatusOr<MlpModel> CommonInit(const TrainingConfig& training,
                                    size_t input_dim, int num_classes,
                                    uint64_t seed) {
  Rng rng = Rng::Derive(seed, {kStreamCommonInit});
  return MlpModel::CreateRandom(ModelDims(training, input_dim, num_classes), rng);
}

absl::StatusOr<Party> PrepareParty(PartyId id, PartyInput input,
                                   const ExperimentConfig& config,
                                   const MlpModel& w0, uint64_t seed) {
  if (input.data.size() < 2) {
    return absl::InvalidArgumentError("party needs at least two examples");
  }
  Party p;
  p.id = id;
  p.sharing_level = input.sharing_level;
  p.adversary = input.adversary;
  p.latency = input.latency;

  Rng split_rng = Rng::Derive(seed, {id, kStreamSplit});
  auto [train, validation] = SplitTrainValidation(
      Shuffled(input.data, split_rng), config.partition.validation_fraction);
  if (train.empty() || validation.empty()) {
    return absl::InvalidArgumentError("train/validation split left a side empty");
  }
  p.train = std::move(train);
  p.validation = std::move(validation);

  AugmentConfig aug;
  aug.kind = config.dataset.augment == "image" ? AugmentKind::kImage
                                                : AugmentKind::kTabular;
  aug.rotation_range = config.dataset.rotation_range;
  aug.shift_range = config.dataset.shift_range;
  aug.replication = config.dataset.augmentation_factor;
  Rng aug_rng = Rng::Derive(seed, {id, kStreamAugment});
  absl::StatusOr<Dataset> augmented = Augment(p.train, aug, aug_rng);
  if (!augmented.ok()) return augmented.status();
  p.augmented = *std::move(augmented);

  absl::StatusOr<CompositionStrategy> strategy =
      ParseStrategy(config.privacy.strategy);
  if (!strategy.ok()) return strategy.status();
  absl::StatusOr<PrivacyAccountant> init = PrivacyAccountant::Create(
      AllocateBudget(BudgetStage::kInitialisation, config.dataset.name), *strategy);
  absl::StatusOr<PrivacyAccountant> update = PrivacyAccountant::Create(
      AllocateBudget(BudgetStage::kUpdate, config.dataset.name), *strategy);
  if (!init.ok()) return init.status();
  if (!update.ok()) return update.status();
  p.init_accountant = *std::move(init);
  p.update_accountant = *std::move(update);

  Rng key_rng = Rng::Derive(seed, {id, kStreamKeys});
  p.keys = KeyPair::Derive(key_rng);
  p.model = w0;
  p.release_rng = Rng::Derive(seed, {id, kStreamRelease});
  p.label_rng = Rng::Derive(seed, {id, kStreamLabels});
  p.dp_rng = Rng::Derive(seed, {id, kStreamDpSgd});
  p.envelope_rng = Rng::Derive(seed, {id, kStreamEnvelope});
  p.adversary_rng = Rng::Derive(seed, {id, kStreamAdversary});
  p.local_rng = Rng::Derive(seed, {id, kStreamLocal});
  return p;
}

absl::Status Pretrain(Party& party, const ExperimentConfig& config,
                      const Dataset& test, uint64_t seed) {
  SgdOptions opts;
  opts.epochs = config.training.pretrain_epochs;
  opts.batch_size = config.training.batch_size;
  opts.schedule = {config.training.learning_rate, config.training.decay};
  Rng rng = Rng::Derive(seed, {party.id, kStreamPretrain});
  if (opts.epochs > 0) {
    if (absl::Status s = TrainSgd(party.model, party.train, opts, party.sgd_step, rng);
        !s.ok()) {
      return s;
    }
  }
  absl::StatusOr<double> acc = Evaluate(party.model, test);
  if (!acc.ok()) return acc.status();
  party.standalone_accuracy = *acc;
  return absl::OkStatus();
}

}  // namespace fairdl

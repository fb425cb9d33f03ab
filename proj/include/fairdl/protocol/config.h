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

#ifndef FAIRDL_PROTOCOL_CONFIG_H_
#define FAIRDL_PROTOCOL_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/adversary/adversary.h"
#include "fairdl/numerics/dataset.h"

namespace fairdl {

enum class FrameworkKind { kStandalone, kCentralised, kDistributed, kFdpddl };

std::string_view FrameworkName(FrameworkKind kind);
absl::StatusOr<FrameworkKind> ParseFramework(std::string_view name);

struct DatasetConfig {
  // Name used for budget rules ("svhn" tightens delta).
  std::string name = "blobs";
  // "blobs", "csv" or "idx".
  std::string source = "blobs";
  BlobSpec blobs{.spread = 0.25};
  std::string csv_path;
  std::string idx_images;
  std::string idx_labels;
  int num_classes = 10;
  // Held-out examples for reporting accuracies.
  size_t test_size = 2000;
  // "tabular" or "image".
  std::string augment = "tabular";
  double rotation_range = 1.0;
  double shift_range = 0.01;
  size_t augmentation_factor = 100;

  bool operator==(const DatasetConfig&) const = default;
};

struct PartitionConfig {
  // 1: equal sizes, equal lambda. 2: equal sizes, lambda uniform in
  // [lambda_low, lambda_high]. 3: Dirichlet sizes, equal lambda.
  int setting = 1;
  size_t parties = 4;
  size_t examples_per_party = 150;
  // Setting 3: every party first receives this many examples, the rest of
  // the pool is split by a symmetric Dirichlet draw.
  size_t min_party_size = 30;
  double dirichlet_alpha = 1.0;
  double lambda = 0.1;
  double lambda_low = 0.1;
  double lambda_high = 0.5;
  double validation_fraction = 0.2;

  bool operator==(const PartitionConfig&) const = default;
};

struct TrainingConfig {
  std::vector<int> hidden = {32};
  double learning_rate = 0.1;
  double decay = 1e-7;
  size_t batch_size = 16;
  size_t pretrain_epochs = 60;

  bool operator==(const TrainingConfig&) const = default;
};

struct PrivacyConfig {
  double epsilon_per_step = 1.0;
  double delta_per_step = 1e-6;
  double clip_norm = 1.0;
  std::string strategy = "amplified-basic";
  size_t steps_per_round = 2;
  // 0 selects round(sqrt(N)) over the augmented local set.
  size_t lot_size = 400;
  // Step size for the private update stage; 0 reuses training.learning_rate.
  double learning_rate = 0.8;

  bool operator==(const PrivacyConfig&) const = default;
};

struct ReleaseConfig {
  double epsilon = 1.0;
  double delta = 1e-6;
  double jitter = 0.02;

  bool operator==(const ReleaseConfig&) const = default;
};

struct ProtocolConfig {
  size_t rounds = 20;
  // 0 selects (1/n)(2/3).
  double threshold = 0;
  // Tokens a party keeps back; the download budget is balance - reserve.
  int64_t token_reserve = 1;
  // Dispute fine as a multiple of the order size.
  double fine_factor = 1.0;
  // Per-party response latency; buyers skip sellers slower than `timeout`
  // when timeout > 0.
  std::vector<double> latency;
  double timeout = 0;

  bool operator==(const ProtocolConfig&) const = default;
};

struct DssgdConfig {
  double upload_rate = 0.1;
  double download_rate = 1.0;
  size_t local_epochs = 1;

  bool operator==(const DssgdConfig&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetConfig dataset;
  PartitionConfig partition;
  TrainingConfig training;
  PrivacyConfig privacy;
  ReleaseConfig release;
  ProtocolConfig protocol;
  DssgdConfig dssgd;
  std::vector<AdversaryConfig> adversaries;
  std::vector<FrameworkKind> frameworks = {
      FrameworkKind::kStandalone, FrameworkKind::kCentralised,
      FrameworkKind::kDistributed, FrameworkKind::kFdpddl};
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  // Leave-one-out costs n-1 evaluations per party and round.
  size_t max_parties = 16;

  // Every problem found, empty when valid.
  std::vector<std::string> Validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string ConfigToJson(const ExperimentConfig& config);
// Missing fields keep their defaults; unknown fields are errors.
absl::StatusOr<ExperimentConfig> ConfigFromJson(std::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

}  // namespace fairdl

#endif  // FAIRDL_PROTOCOL_CONFIG_H_

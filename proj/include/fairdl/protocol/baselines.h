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

#ifndef FAIRDL_PROTOCOL_BASELINES_H_
#define FAIRDL_PROTOCOL_BASELINES_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/protocol/config.h"
#include "fairdl/protocol/party.h"

namespace fairdl {

struct BaselineResult {
  FrameworkKind kind = FrameworkKind::kStandalone;
  // Test accuracy after local pretraining, identical across frameworks for
  // the same (config, inputs, seed).
  std::vector<double> standalone_accuracy;
  std::vector<double> final_accuracy;
  // trace[t][i]: test accuracy of party i after step t of the framework.
  std::vector<std::vector<double>> trace;
};

// Pretraining continued for `rounds` more local epochs, no exchange.
absl::StatusOr<BaselineResult> RunStandalone(const ExperimentConfig& config,
                                             std::vector<PartyInput> inputs,
                                             const Dataset& test, uint64_t seed);

// One model trained on the pooled train splits for pretrain_epochs + rounds
// epochs; every party reports that model's accuracy.
absl::StatusOr<BaselineResult> RunCentralised(const ExperimentConfig& config,
                                              std::vector<PartyInput> inputs,
                                              const Dataset& test, uint64_t seed);

// Distributed selective SGD with a parameter server and round-robin turns,
// pretrain_epochs + rounds sweeps. A turn downloads the download_rate share
// of coordinates that differ most from the local copy, trains local_epochs
// without noise, and uploads the upload_rate largest entries of the change.
absl::StatusOr<BaselineResult> RunDistributed(const ExperimentConfig& config,
                                              std::vector<PartyInput> inputs,
                                              const Dataset& test, uint64_t seed);

}  // namespace fairdl

#endif  // FAIRDL_PROTOCOL_BASELINES_H_

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

#ifndef FAIRDL_PROTOCOL_SIMULATION_H_
#define FAIRDL_PROTOCOL_SIMULATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/common/events.h"
#include "fairdl/credibility/credibility.h"
#include "fairdl/ledger/exchange.h"
#include "fairdl/ledger/ledger.h"
#include "fairdl/numerics/sparse_update.h"
#include "fairdl/protocol/config.h"
#include "fairdl/protocol/party.h"

namespace fairdl {

// One party's state at the end of a round. Round 0 is the initialisation.
struct RoundRecord {
  int round = 0;
  PartyId party = 0;
  double test_accuracy = 0;
  double validation_accuracy = 0;
  int64_t tokens = 0;
  // Gradient coordinates bought and offered this round.
  int64_t downloaded = 0;
  int64_t offered = 0;
  bool credible = true;
  bool operator==(const RoundRecord&) const = default;
};

struct CredibilityRecord {
  int round = 0;
  PartyId owner = 0;
  PartyId peer = 0;
  double value = 0;
  bool operator==(const CredibilityRecord&) const = default;
};

// Leave-one-out evaluation of one purchased update.
struct LeaveOneOutRecord {
  int round = 0;
  PartyId buyer = 0;
  PartyId seller = 0;
  double accuracy = 0;
  double accuracy_without = 0;
  double factor = 0;
  bool operator==(const LeaveOneOutRecord&) const = default;
};

struct InitialisationResult {
  CredibleSet credible;
  // Owner -> peer -> raw match rate.
  std::map<PartyId, std::map<PartyId, double>> raw;
  std::map<PartyId, std::set<PartyId>> reports;
  std::vector<PartyId> excluded;
};

struct FdpddlResult {
  std::vector<double> standalone_accuracy;
  std::vector<double> final_accuracy;
  InitialisationResult initialisation;
  std::vector<RoundRecord> rounds;
  std::vector<CredibilityRecord> credibility;
  std::vector<LeaveOneOutRecord> leave_one_out;
  std::vector<RunEvent> events;
  std::vector<Block> chain;
};

// One FDPDDL run over fixed party data. Every random choice is drawn from
// per-party streams derived from `seed`, so a run is a pure function of
// (config, inputs, seed).
class FdpddlSimulation {
 public:
  static absl::StatusOr<FdpddlSimulation> Create(const ExperimentConfig& config,
                                                 std::vector<PartyInput> inputs,
                                                 Dataset test, uint64_t seed);

  // Local pretraining from the common initial parameters.
  absl::Status Pretrain();
  // Credibility initialisation. The first call writes the genesis block;
  // later calls (after a join) reuse the chain. Fails if fewer than two
  // parties stay credible.
  absl::StatusOr<InitialisationResult> RunInitialisation();
  // One update round: buy, score, vote and settle.
  absl::Status RunUpdateRound();
  // Pretrain, initialise and run the configured rounds.
  absl::StatusOr<FdpddlResult> Run();

  // Registers a new party (minting its tokens) and reruns initialisation.
  absl::StatusOr<PartyId> Join(PartyInput input);
  // Drops a party from every local list; the ledger is not involved.
  absl::Status Depart(PartyId party);

  FdpddlResult Result() const;

  const std::vector<Party>& parties() const { return parties_; }
  const CredibleSet& credible() const { return credible_; }
  const Ledger& ledger() const { return *ledger_; }
  const std::vector<RunEvent>& events() const { return events_; }
  int round() const { return round_; }
  size_t parameter_count() const { return w0_.parameter_count(); }

 private:
  FdpddlSimulation(const ExperimentConfig& config, Dataset test, uint64_t seed,
                   MlpModel w0)
      : config_(config), test_(std::move(test)), seed_(seed), w0_(std::move(w0)) {}

  double Threshold() const;
  size_t MemberCount() const;
  absl::Status CreateGenesis();
  // Submits exclusion punishments for `excluded` and records the events.
  absl::Status ExcludeParties(const std::vector<PartyId>& excluded);
  void RecordRound(const std::map<PartyId, int64_t>& downloaded,
                   const std::map<PartyId, int64_t>& offered);
  // Runs local DP-SGD (or the adversary's substitute); nullopt when the
  // party publishes nothing this round.
  std::optional<DenseGradient> LocalUpdate(Party& p);

  ExperimentConfig config_;
  Dataset test_;
  uint64_t seed_;
  MlpModel w0_;
  std::vector<Party> parties_;
  std::optional<Ledger> ledger_;
  PayloadStore store_;
  CredibleSet credible_;
  int round_ = 0;
  bool pretrained_ = false;
  InitialisationResult last_init_;
  std::vector<RunEvent> events_;
  std::vector<RoundRecord> rounds_;
  std::vector<CredibilityRecord> credibility_;
  std::vector<LeaveOneOutRecord> leave_one_out_;
};

}  // namespace fairdl

#endif  // FAIRDL_PROTOCOL_SIMULATION_H_

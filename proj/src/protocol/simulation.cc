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

#include "fairdl/protocol/simulation.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"
#include "fairdl/credibility/allocation.h"
#include "fairdl/credibility/tokens.h"
#include "fairdl/credibility/voting.h"
#include "fairdl/privacy/dp_sgd.h"
#include "fairdl/samplegen/release.h"

namespace fairdl {

namespace {

CredibilityList Renormalized(const CredibilityList& list) {
  return NormalizeAndScreen(list.owner(), list.values(), list.threshold()).list;
}

DenseGradient Difference(std::span<const double> after,
                         std::span<const double> before) {
  DenseGradient d{std::vector<double>(after.size())};
  for (size_t k = 0; k < after.size(); ++k) d.values[k] = after[k] - before[k];
  return d;
}

}  // namespace

absl::StatusOr<FdpddlSimulation> FdpddlSimulation::Create(
    const ExperimentConfig& config, std::vector<PartyInput> inputs, Dataset test,
    uint64_t seed) {
  if (inputs.size() < 2) return absl::InvalidArgumentError("need at least two parties");
  if (inputs.size() > config.max_parties) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d parties exceed max_parties %d", inputs.size(), config.max_parties));
  }
  if (test.empty()) return absl::InvalidArgumentError("empty test set");
  for (const PartyInput& in : inputs) {
    if (in.data.dim() != test.dim() || in.data.num_classes != test.num_classes) {
      return absl::InvalidArgumentError("party data does not match the test task");
    }
    if (!(in.sharing_level > 0 && in.sharing_level <= 1)) {
      return absl::InvalidArgumentError("sharing level must be in (0, 1]");
    }
  }
  absl::StatusOr<MlpModel> w0 =
      CommonInit(config.training, test.dim(), test.num_classes, seed);
  if (!w0.ok()) return w0.status();
  FdpddlSimulation sim(config, std::move(test), seed, *std::move(w0));
  for (size_t i = 0; i < inputs.size(); ++i) {
    absl::StatusOr<Party> p = PrepareParty(static_cast<PartyId>(i),
                                           std::move(inputs[i]), config, sim.w0_, seed);
    if (!p.ok()) return p.status();
    sim.parties_.push_back(*std::move(p));
  }
  return sim;
}

absl::Status FdpddlSimulation::Pretrain() {
  for (Party& p : parties_) {
    if (p.departed) continue;
    if (absl::Status s = fairdl::Pretrain(p, config_, test_, seed_); !s.ok()) return s;
  }
  pretrained_ = true;
  return absl::OkStatus();
}

size_t FdpddlSimulation::MemberCount() const {
  size_t n = 0;
  for (const Party& p : parties_) {
    if (!p.departed && !(ledger_ && ledger_->state().IsExcluded(p.id))) ++n;
  }
  return n;
}

double FdpddlSimulation::Threshold() const {
  return config_.protocol.threshold > 0 ? config_.protocol.threshold
                                        : DefaultThreshold(MemberCount());
}

absl::Status FdpddlSimulation::CreateGenesis() {
  std::vector<Transaction> registrations;
  for (const Party& p : parties_) {
    absl::StatusOr<int64_t> tokens =
        InitTokens(p.sharing_level, parameter_count(), parties_.size());
    if (!tokens.ok()) return tokens.status();
    registrations.push_back(MakeRegistration(p.keys, p.id, *tokens, 0));
  }
  absl::StatusOr<Ledger> ledger = Ledger::CreateGenesis(std::move(registrations));
  if (!ledger.ok()) return ledger.status();
  ledger_.emplace(*std::move(ledger));
  return absl::OkStatus();
}

absl::Status FdpddlSimulation::ExcludeParties(const std::vector<PartyId>& excluded) {
  const PartyId leader = ledger_->leader();
  for (PartyId e : excluded) {
    Transaction tx = MakePunishment(parties_[leader].keys, leader, e, kNoParty, 0,
                                    /*exclusion=*/true, Hash{}, "consensus exclusion",
                                    ledger_->pending_index());
    if (absl::StatusOr<Hash> id = ledger_->Submit(tx); !id.ok()) return id.status();
    events_.push_back({EventKind::kExcluded, e, round_});
  }
  return absl::OkStatus();
}

absl::StatusOr<InitialisationResult> FdpddlSimulation::RunInitialisation() {
  if (!pretrained_) {
    if (absl::Status s = Pretrain(); !s.ok()) return s;
  }
  if (!ledger_) {
    if (absl::Status s = CreateGenesis(); !s.ok()) return s;
  }
  std::vector<PartyId> members;
  for (const Party& p : parties_) {
    if (!p.departed && !ledger_->state().IsExcluded(p.id)) members.push_back(p.id);
  }
  if (members.size() < 2) {
    return absl::FailedPreconditionError("fewer than two parties to initialise");
  }
  const double threshold = Threshold();
  const int num_classes = test_.num_classes;

  PrototypeOptions options;
  options.epsilon = config_.release.epsilon;
  options.delta = config_.release.delta;
  options.jitter = config_.release.jitter;
  options.multiplicity = config_.dataset.augmentation_factor;
  const NoisyPrototypeGenerator generator(options);

  InitialisationResult result;
  for (PartyId i : members) {
    Party& owner = parties_[i];
    absl::StatusOr<SampleRelease> release =
        generator.Generate(i, owner.train, owner.sharing_level, *owner.init_accountant,
                           owner.release_rng);
    std::map<PartyId, double> raw;
    if (release.ok() && release->count() > 0) {
      // Every member labels the release, the owner included.
      std::vector<std::vector<int>> columns;
      for (PartyId j : members) {
        Party& labeller = parties_[j];
        if (labeller.adversary &&
            labeller.adversary->kind == AdversaryKind::kFreeRiderRandomLabel) {
          columns.push_back(FreeriderLabels(*release, num_classes, labeller.label_rng));
        } else {
          columns.push_back(Predict(labeller.model, release->samples()));
        }
      }
      std::vector<std::vector<int>> rows(release->count(),
                                         std::vector<int>(members.size()));
      for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < members.size(); ++c) rows[r][c] = columns[c][r];
      }
      absl::StatusOr<LabelMatrix> matrix = LabelMatrix::Create(members, std::move(rows));
      if (!matrix.ok()) return matrix.status();
      raw = InitCredibility(*matrix);
      raw.erase(i);
    } else if (!release.ok() && !absl::IsResourceExhausted(release.status())) {
      return release.status();
    } else {
      // Nothing released: no evidence either way.
      for (PartyId j : members) {
        if (j != i) raw[j] = 1.0;
      }
    }
    ScreenResult screened = NormalizeAndScreen(i, raw, threshold);
    owner.credibility = screened.list;
    result.raw[i] = raw;
    result.reports[i] =
        std::set<PartyId>(screened.reports.begin(), screened.reports.end());
  }

  const CredibleSet before(members.begin(), members.end());
  absl::StatusOr<CredibleSet> after = ConsensusExclude(result.reports, before);
  if (!after.ok()) return after.status();
  if (after->size() < 2) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "initialisation left %d credible part%s; the protocol needs two",
        after->size(), after->size() == 1 ? "y" : "ies"));
  }
  for (PartyId p : before) {
    if (!after->count(p)) result.excluded.push_back(p);
  }
  if (absl::Status s = ExcludeParties(result.excluded); !s.ok()) return s;
  for (PartyId i : *after) {
    CredibilityList& list = parties_[i].credibility;
    for (PartyId e : result.excluded) list.Remove(e);
    list = Renormalized(list);
  }
  ledger_->Seal();
  credible_ = *after;
  result.credible = credible_;
  last_init_ = result;
  RecordRound({}, {});
  return result;
}

std::optional<DenseGradient> FdpddlSimulation::LocalUpdate(Party& p) {
  const size_t count = parameter_count();
  if (p.IsFreeRider()) {
    const AdversaryKind kind = p.adversary->kind == AdversaryKind::kFreeRiderCraftedGrad
                                   ? AdversaryKind::kFreeRiderCraftedGrad
                                   : AdversaryKind::kFreeRiderRandomGrad;
    const DenseGradient* echo =
        p.last_received.values.empty() ? nullptr : &p.last_received;
    return FreeriderGradients(kind, count, p.adversary->scale, echo, p.adversary_rng);
  }
  if (p.privacy_exhausted) return std::nullopt;
  PrivacyParams params;
  params.epsilon_per_step = config_.privacy.epsilon_per_step;
  params.delta_per_step = config_.privacy.delta_per_step;
  params.clip_norm = config_.privacy.clip_norm;
  params.dataset_size = p.augmented.size();
  params.lot_size = config_.privacy.lot_size > 0
                        ? config_.privacy.lot_size
                        : std::max<size_t>(1, static_cast<size_t>(std::llround(
                                                  std::sqrt(p.augmented.size()))));
  const std::vector<double> before(p.model.parameters().begin(),
                                   p.model.parameters().end());
  const InverseTimeDecay schedule{config_.privacy.learning_rate > 0
                                      ? config_.privacy.learning_rate
                                      : config_.training.learning_rate,
                                  config_.training.decay};
  absl::StatusOr<DpTrainResult> trained =
      DpTrain(p.model, p.augmented, params, schedule, config_.privacy.steps_per_round,
              p.sgd_step, *p.update_accountant, p.dp_rng);
  if (!trained.ok() || trained->budget_exhausted) {
    p.privacy_exhausted = true;
    events_.push_back({EventKind::kPrivacyExhausted, p.id, round_});
  }
  if (!trained.ok() || trained->steps == 0) return std::nullopt;
  return Difference(p.model.parameters(), before);
}

absl::Status FdpddlSimulation::RunUpdateRound() {
  if (!ledger_) return absl::FailedPreconditionError("initialise before updating");
  ++round_;
  const uint64_t block = ledger_->pending_index();
  const size_t count = parameter_count();
  const double threshold = Threshold();

  // Local training; parties only read their own state here.
  std::map<PartyId, DenseGradient> offers;
  std::map<PartyId, int64_t> capacity;
  for (PartyId i : credible_) {
    std::optional<DenseGradient> delta = LocalUpdate(parties_[i]);
    if (!delta) continue;
    offers[i] = *std::move(delta);
    capacity[i] = FloorCount(parties_[i].sharing_level * static_cast<double>(count));
  }

  // Orders and fulfillments pass through the ledger one buyer at a time.
  std::map<PartyId, std::map<PartyId, SparseUpdate>> bought;
  std::map<PartyId, int64_t> downloaded;
  for (PartyId i : credible_) {
    Party& buyer = parties_[i];
    const int64_t balance = ledger_->state().Balance(i);
    const int64_t spendable = balance - config_.protocol.token_reserve;
    if (spendable <= 0) {
      if (!buyer.tokens_exhausted) {
        buyer.tokens_exhausted = true;
        events_.push_back({EventKind::kTokensExhausted, i, round_});
      }
      continue;
    }
    std::map<PartyId, int64_t> peer_capacity;
    int64_t supply = 0;
    for (const auto& [j, cap] : capacity) {
      if (j == i || cap <= 0) continue;
      peer_capacity[j] = cap;
      supply += cap;
    }
    const int64_t budget = std::min(spendable, supply);
    if (budget <= 0 || !DownloadGuard(budget, balance)) continue;

    std::map<PartyId, int64_t> allocated;
    int64_t taken = 0;
    for (const auto& [j, cap] : peer_capacity) {
      const int64_t d = std::min(
          cap, DownloadAllocation(buyer.credibility.Get(j), budget,
                                  parties_[j].sharing_level, count));
      allocated[j] = d;
      taken += d;
    }
    SupplementRequest request;
    request.budget = budget;
    request.allocated = allocated;
    request.capacity = peer_capacity;
    for (const auto& [j, cap] : peer_capacity) {
      request.credibility[j] = buyer.credibility.Get(j);
    }
    request.token_limit = budget - taken;
    for (const auto& [j, extra] : Supplement(request)) allocated[j] += extra;

    for (const auto& [j, amount] : allocated) {
      if (amount <= 0) continue;
      Party& seller = parties_[j];
      Transaction order = MakePurchaseOrder(buyer.keys, i, j, amount, amount, block);
      absl::StatusOr<Hash> order_id = ledger_->Submit(order);
      if (!order_id.ok()) return order_id.status();
      // A seller slower than the timeout never answers; its escrow is
      // refunded when the block closes.
      if (config_.protocol.timeout > 0 && seller.latency > config_.protocol.timeout) {
        continue;
      }
      absl::StatusOr<SparseUpdate> selected =
          SelectLargest(offers.at(j), static_cast<size_t>(amount));
      if (!selected.ok()) return selected.status();
      absl::StatusOr<Fulfillment> sent = FulfillOrder(
          *ledger_, store_, seller.keys, *order_id, *selected, seller.envelope_rng);
      if (!sent.ok()) return sent.status();
      absl::StatusOr<SparseUpdate> received =
          ReceiveOrder(*ledger_, store_, buyer.keys, *order_id);
      if (!received.ok()) return received.status();
      bought[i][j] = *std::move(received);
      downloaded[i] += amount;
    }
  }

  // w' = w + dw + sum of purchased updates, then leave-one-out credibility.
  std::map<PartyId, std::set<PartyId>> reports;
  for (PartyId i : credible_) {
    Party& p = parties_[i];
    const std::map<PartyId, SparseUpdate>& mine = bought[i];
    std::vector<SparseUpdate> updates;
    for (const auto& [j, s] : mine) updates.push_back(s);
    if (absl::Status s = ApplyUpdates(p.model, updates); !s.ok()) return s;
    if (!updates.empty()) {
      absl::StatusOr<MlpModel> zero = MlpModel::Create(p.model.layer_dims());
      if (!zero.ok()) return zero.status();
      if (absl::Status s = ApplyUpdates(*zero, updates); !s.ok()) return s;
      p.last_received.values.assign(zero->parameters().begin(),
                                    zero->parameters().end());
    }
    absl::StatusOr<double> acc = Evaluate(p.model, p.validation);
    if (!acc.ok()) return acc.status();
    std::map<PartyId, double> raw;
    for (const auto& [j, c] : p.credibility.values()) {
      auto it = mine.find(j);
      if (it == mine.end()) {
        raw[j] = UpdateCredibility(c, *acc, *acc);
        continue;
      }
      MlpModel without = p.model;
      const SparseUpdate negated = it->second.Negated();
      if (absl::Status s = ApplyUpdates(without, std::span(&negated, 1)); !s.ok()) {
        return s;
      }
      absl::StatusOr<double> acc_j = Evaluate(without, p.validation);
      if (!acc_j.ok()) return acc_j.status();
      raw[j] = UpdateCredibility(c, *acc, *acc_j);
      leave_one_out_.push_back({round_, i, j, *acc, *acc_j,
                                CredibilitySigmoid(AccuracyFactor(*acc, *acc_j))});
    }
    ScreenResult screened = NormalizeAndScreen(i, raw, threshold);
    p.credibility = screened.list;
    reports[i] = std::set<PartyId>(screened.reports.begin(), screened.reports.end());
  }

  absl::StatusOr<CredibleSet> next = ConsensusExclude(reports, credible_);
  // Removing everyone is refused; the round then excludes nobody.
  if (!next.ok()) next = credible_;
  std::vector<PartyId> excluded;
  for (PartyId p : credible_) {
    if (!next->count(p)) excluded.push_back(p);
  }
  if (absl::Status s = ExcludeParties(excluded); !s.ok()) return s;
  for (PartyId i : *next) {
    Party& p = parties_[i];
    for (PartyId e : excluded) {
      auto it = bought[i].find(e);
      if (it != bought[i].end()) {
        const SparseUpdate negated = it->second.Negated();
        if (absl::Status s = ApplyUpdates(p.model, std::span(&negated, 1)); !s.ok()) {
          return s;
        }
      }
      p.credibility.Remove(e);
    }
    if (!excluded.empty()) p.credibility = Renormalized(p.credibility);
  }
  const PartyId leader = ledger_->leader();
  if (absl::StatusOr<std::vector<Hash>> expired =
          ExpireOpenOrders(*ledger_, parties_[leader].keys);
      !expired.ok()) {
    return expired.status();
  }
  ledger_->Seal();
  credible_ = *std::move(next);
  std::map<PartyId, int64_t> offered;
  for (const auto& [j, cap] : capacity) offered[j] = cap;
  RecordRound(downloaded, offered);
  return absl::OkStatus();
}

void FdpddlSimulation::RecordRound(const std::map<PartyId, int64_t>& downloaded,
                                   const std::map<PartyId, int64_t>& offered) {
  auto lookup = [](const std::map<PartyId, int64_t>& m, PartyId p) -> int64_t {
    auto it = m.find(p);
    return it == m.end() ? 0 : it->second;
  };
  for (const Party& p : parties_) {
    RoundRecord r;
    r.round = round_;
    r.party = p.id;
    r.test_accuracy = Evaluate(p.model, test_).value_or(0.0);
    r.validation_accuracy = Evaluate(p.model, p.validation).value_or(0.0);
    r.tokens = ledger_->state().Balance(p.id);
    r.downloaded = lookup(downloaded, p.id);
    r.offered = lookup(offered, p.id);
    r.credible = credible_.count(p.id) > 0;
    rounds_.push_back(r);
  }
  for (PartyId i : credible_) {
    for (const auto& [j, v] : parties_[i].credibility.values()) {
      credibility_.push_back({round_, i, j, v});
    }
  }
}

absl::StatusOr<FdpddlResult> FdpddlSimulation::Run() {
  if (absl::Status s = Pretrain(); !s.ok()) return s;
  if (absl::StatusOr<InitialisationResult> init = RunInitialisation(); !init.ok()) {
    return init.status();
  }
  for (size_t r = 0; r < config_.protocol.rounds; ++r) {
    if (absl::Status s = RunUpdateRound(); !s.ok()) return s;
  }
  return Result();
}

absl::StatusOr<PartyId> FdpddlSimulation::Join(PartyInput input) {
  if (!ledger_) return absl::FailedPreconditionError("join after initialisation");
  if (parties_.size() + 1 > config_.max_parties) {
    return absl::ResourceExhaustedError("max_parties reached");
  }
  if (input.data.dim() != test_.dim() || input.data.num_classes != test_.num_classes) {
    return absl::InvalidArgumentError("party data does not match the test task");
  }
  const PartyId id = static_cast<PartyId>(parties_.size());
  absl::StatusOr<Party> p = PrepareParty(id, std::move(input), config_, w0_, seed_);
  if (!p.ok()) return p.status();
  if (absl::Status s = fairdl::Pretrain(*p, config_, test_, seed_); !s.ok()) return s;
  absl::StatusOr<int64_t> tokens =
      InitTokens(p->sharing_level, parameter_count(), MemberCount() + 1);
  if (!tokens.ok()) return tokens.status();
  absl::StatusOr<Hash> reg = ledger_->Submit(
      MakeRegistration(p->keys, id, *tokens, ledger_->pending_index()));
  if (!reg.ok()) return reg.status();
  parties_.push_back(*std::move(p));
  events_.push_back({EventKind::kJoined, id, round_});
  absl::StatusOr<InitialisationResult> init = RunInitialisation();
  if (!init.ok()) return init.status();
  return id;
}

absl::Status FdpddlSimulation::Depart(PartyId party) {
  if (party >= parties_.size() || parties_[party].departed) {
    return absl::NotFoundError(absl::StrFormat("party %d is not present", party));
  }
  parties_[party].departed = true;
  credible_.erase(party);
  for (PartyId i : credible_) {
    CredibilityList& list = parties_[i].credibility;
    list.Remove(party);
    list = Renormalized(list);
  }
  events_.push_back({EventKind::kDeparted, party, round_});
  return absl::OkStatus();
}

FdpddlResult FdpddlSimulation::Result() const {
  FdpddlResult r;
  for (const Party& p : parties_) {
    r.standalone_accuracy.push_back(p.standalone_accuracy);
    r.final_accuracy.push_back(Evaluate(p.model, test_).value_or(0.0));
  }
  r.initialisation = last_init_;
  r.rounds = rounds_;
  r.credibility = credibility_;
  r.leave_one_out = leave_one_out_;
  r.events = events_;
  if (ledger_) r.chain = ledger_->blocks();
  return r;
}

}  // namespace fairdl

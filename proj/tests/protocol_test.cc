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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "fairdl/credibility/credibility.h"
#include "fairdl/credibility/tokens.h"
#include "fairdl/harness/setting.h"
#include "fairdl/ledger/ledger.h"
#include "fairdl/protocol/baselines.h"
#include "fairdl/protocol/config.h"
#include "fairdl/protocol/party.h"
#include "fairdl/protocol/simulation.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairdl {
namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.dataset.test_size = 500;
  c.training.pretrain_epochs = 20;
  c.protocol.rounds = 3;
  c.seeds = {1};
  return c;
}

absl::StatusOr<FdpddlSimulation> MakeSim(const ExperimentConfig& c, uint64_t seed) {
  absl::StatusOr<CellData> cell = BuildCell(c, seed);
  if (!cell.ok()) return cell.status();
  return FdpddlSimulation::Create(c, cell->parties, cell->test, seed);
}

bool Mentions(const Transaction& tx, PartyId p) {
  return tx.author == p || tx.subject == p || tx.counterparty == p;
}

// ---------------------------------------------------------------- config

TEST(ConfigTest, DefaultsAreValid) {
  EXPECT_TRUE(ExperimentConfig{}.Validate().empty());
  EXPECT_TRUE(SmallConfig().Validate().empty());
}

TEST(ConfigTest, JsonRoundTrip) {
  ExperimentConfig c;
  c.name = "round trip";
  c.partition.setting = 2;
  c.partition.lambda_high = 0.4;
  c.training.hidden = {16, 8};
  c.protocol.latency = {0, 0.5, 0, 2};
  c.protocol.timeout = 1;
  c.adversaries = {{.party = 3, .kind = AdversaryKind::kFreeRiderCraftedGrad,
                    .scale = 0.01}};
  c.frameworks = {FrameworkKind::kFdpddl, FrameworkKind::kDistributed};
  c.seeds = {7, 9};
  ASSERT_OK_AND_ASSIGN(ExperimentConfig back, ConfigFromJson(ConfigToJson(c)));
  EXPECT_EQ(back, c);
  EXPECT_EQ(ConfigToJson(back), ConfigToJson(c));
}

TEST(ConfigTest, MissingKeysKeepDefaults) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ConfigFromJson(R"({"protocol": {"rounds": 7}})"));
  ExperimentConfig expected;
  expected.protocol.rounds = 7;
  EXPECT_EQ(c, expected);
}

TEST(ConfigTest, UnknownAndMistypedFieldsAreAllReported) {
  absl::StatusOr<ExperimentConfig> c =
      ConfigFromJson(R"({"protocol": {"roundz": 3, "threshold": "low"}, "extra": 1})");
  ASSERT_FALSE(c.ok());
  EXPECT_TRUE(absl::IsInvalidArgument(c.status()));
  const std::string msg(c.status().message());
  EXPECT_NE(msg.find("roundz"), std::string::npos) << msg;
  EXPECT_NE(msg.find("threshold"), std::string::npos) << msg;
  EXPECT_NE(msg.find("extra"), std::string::npos) << msg;
}

TEST(ConfigTest, ValidateListsEveryProblem) {
  ExperimentConfig c;
  c.protocol.token_reserve = 0;
  c.privacy.clip_norm = -1;
  c.protocol.latency = {1, 2};
  c.frameworks = {FrameworkKind::kFdpddl, FrameworkKind::kFdpddl};
  EXPECT_GE(c.Validate().size(), 4u);
}

TEST(ConfigTest, AdversaryRules) {
  ExperimentConfig c;
  c.adversaries = {{.party = 0, .kind = AdversaryKind::kGanAttacker},
                   {.party = 1, .kind = AdversaryKind::kGanAttacker}};
  EXPECT_FALSE(c.Validate().empty());
  c.adversaries = {{.party = 0}, {.party = 0}};
  EXPECT_FALSE(c.Validate().empty());
  c.adversaries = {{.party = 0}, {.party = 1}, {.party = 2}, {.party = 3}};
  EXPECT_FALSE(c.Validate().empty());
  c.adversaries = {{.party = 9}};
  EXPECT_FALSE(c.Validate().empty());
}

TEST(ConfigTest, FrameworkNames) {
  for (FrameworkKind k : {FrameworkKind::kStandalone, FrameworkKind::kCentralised,
                          FrameworkKind::kDistributed, FrameworkKind::kFdpddl}) {
    ASSERT_OK_AND_ASSIGN(FrameworkKind back, ParseFramework(FrameworkName(k)));
    EXPECT_EQ(back, k);
  }
  EXPECT_FALSE(ParseFramework("federated").ok());
}

// ---------------------------------------------------------------- pretrain

TEST(PretrainTest, ZeroEpochsLeavesCommonInit) {
  ExperimentConfig c = SmallConfig();
  c.training.pretrain_epochs = 0;
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(c, 3));
  ASSERT_OK(sim.Pretrain());
  ASSERT_OK_AND_ASSIGN(MlpModel w0, CommonInit(c.training, 32, 10, 3));
  for (const Party& p : sim.parties()) {
    ASSERT_TRUE(std::ranges::equal(p.model.parameters(), w0.parameters()));
  }
}

TEST(PretrainTest, LocalModelsBeatChance) {
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(SmallConfig(), 1));
  ASSERT_OK(sim.Pretrain());
  for (const Party& p : sim.parties()) EXPECT_GT(p.standalone_accuracy, 0.3);
}

// ---------------------------------------------------------------- init

TEST(InitialisationTest, GenesisMintsInitTokens) {
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(SmallConfig(), 1));
  ASSERT_OK_AND_ASSIGN(InitialisationResult init, sim.RunInitialisation());
  EXPECT_TRUE(init.excluded.empty());
  EXPECT_EQ(init.credible.size(), 4u);
  const std::vector<Block>& chain = sim.ledger().blocks();
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_TRUE(VerifyChain(chain));
  ASSERT_OK_AND_ASSIGN(int64_t tokens, InitTokens(0.1, sim.parameter_count(), 4));
  ASSERT_EQ(chain[0].transactions.size(), 4u);
  for (const Transaction& tx : chain[0].transactions) {
    EXPECT_EQ(tx.kind, TxKind::kRegister);
    EXPECT_EQ(tx.amount, tokens);
  }
}

TEST(InitialisationTest, IdenticalDataGivesNearUniformCredibility) {
  ExperimentConfig c = SmallConfig();
  ASSERT_OK_AND_ASSIGN(CellData cell, BuildCell(c, 2));
  for (PartyInput& in : cell.parties) in.data = cell.parties[0].data;
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim,
                       FdpddlSimulation::Create(c, cell.parties, cell.test, 2));
  ASSERT_OK_AND_ASSIGN(InitialisationResult init, sim.RunInitialisation());
  EXPECT_TRUE(init.excluded.empty());
  for (const Party& p : sim.parties()) {
    EXPECT_NEAR(p.credibility.Sum(), 1.0, 1e-9);
    for (const auto& [peer, v] : p.credibility.values()) {
      EXPECT_NEAR(v, 1.0 / 3, 0.08) << p.id << "->" << peer;
    }
  }
}

TEST(InitialisationTest, ImpossibleThresholdAborts) {
  ExperimentConfig c = SmallConfig();
  c.protocol.threshold = 0.99;
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(c, 1));
  absl::StatusOr<InitialisationResult> init = sim.RunInitialisation();
  EXPECT_TRUE(absl::IsFailedPrecondition(init.status())) << init.status();
}

TEST(InitialisationTest, RandomLabellerIsExcluded) {
  ExperimentConfig c = SmallConfig();
  c.adversaries = {{.party = 3}};
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(c, 1));
  ASSERT_OK_AND_ASSIGN(InitialisationResult init, sim.RunInitialisation());
  EXPECT_EQ(init.excluded, std::vector<PartyId>{3});
  EXPECT_FALSE(sim.credible().count(3));
  EXPECT_TRUE(sim.ledger().state().IsExcluded(3));
  for (PartyId i : sim.credible()) {
    EXPECT_FALSE(sim.parties()[i].credibility.Contains(3));
    EXPECT_NEAR(sim.parties()[i].credibility.Sum(), 1.0, 1e-9);
  }
}

// ---------------------------------------------------------------- update

class UpdateRunTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    absl::StatusOr<FdpddlSimulation> sim = MakeSim(SmallConfig(), 1);
    ASSERT_TRUE(sim.ok());
    absl::StatusOr<FdpddlResult> r = sim->Run();
    ASSERT_TRUE(r.ok()) << r.status();
    result_ = new FdpddlResult(*std::move(r));
  }
  static void TearDownTestSuite() { delete result_; }
  static FdpddlResult* result_;
};
FdpddlResult* UpdateRunTest::result_ = nullptr;

TEST_F(UpdateRunTest, ChainVerifiesWithOneBlockPerRound) {
  const std::vector<Block>& chain = result_->chain;
  EXPECT_EQ(chain.size(), SmallConfig().protocol.rounds + 2);
  EXPECT_OK(CheckChain(chain));
}

TEST_F(UpdateRunTest, TokensAreConserved) {
  ASSERT_OK_AND_ASSIGN(auto balances, ReplayBalances(result_->chain));
  int64_t minted = 0;
  for (const Transaction& tx : result_->chain[0].transactions) minted += tx.amount;
  int64_t total = 0;
  for (const auto& [p, b] : balances) total += b;
  EXPECT_EQ(total, minted);
  // Round records report the replayed balances.
  for (const RoundRecord& r : result_->rounds) {
    if (r.round == static_cast<int>(SmallConfig().protocol.rounds)) {
      EXPECT_EQ(r.tokens, balances.at(r.party));
    }
  }
}

TEST_F(UpdateRunTest, BuyersNeverDipIntoTheReserve) {
  const std::vector<Block>& chain = result_->chain;
  const int64_t reserve = SmallConfig().protocol.token_reserve;
  bool saw_order = false;
  for (size_t b = 2; b < chain.size(); ++b) {
    std::vector<Block> prefix(chain.begin(), chain.begin() + b);
    ASSERT_OK_AND_ASSIGN(auto running, ReplayBalances(prefix));
    for (const Transaction& tx : chain[b].transactions) {
      switch (tx.kind) {
        case TxKind::kPurchaseOrder:
          saw_order = true;
          running[tx.author] -= tx.amount;
          EXPECT_GE(running[tx.author], reserve) << "block " << b;
          break;
        case TxKind::kFulfillment:
          running[tx.author] += tx.amount;
          break;
        case TxKind::kTokenTransfer:
          running[tx.counterparty] += tx.amount;
          break;
        default:
          break;
      }
    }
    std::vector<Block> upto(chain.begin(), chain.begin() + b + 1);
    ASSERT_OK_AND_ASSIGN(auto sealed, ReplayBalances(upto));
    EXPECT_EQ(running, sealed);
  }
  EXPECT_TRUE(saw_order);
}

TEST_F(UpdateRunTest, LeaveOneOutFactorFollowsAccuracyDifference) {
  ASSERT_FALSE(result_->leave_one_out.empty());
  for (const LeaveOneOutRecord& r : result_->leave_one_out) {
    if (r.accuracy > r.accuracy_without) {
      EXPECT_GT(r.factor, 0.5);
    } else if (r.accuracy < r.accuracy_without) {
      EXPECT_LT(r.factor, 0.5);
    } else {
      EXPECT_DOUBLE_EQ(r.factor, 0.5);
    }
  }
}

TEST_F(UpdateRunTest, CredibilityStaysNormalized) {
  std::map<std::pair<int, PartyId>, double> sums;
  for (const CredibilityRecord& r : result_->credibility) {
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, 1.0);
    EXPECT_NE(r.owner, r.peer);
    sums[{r.round, r.owner}] += r.value;
  }
  for (const auto& [key, s] : sums) EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST_F(UpdateRunTest, HonestPartiesStayCredible) {
  for (const RoundRecord& r : result_->rounds) EXPECT_TRUE(r.credible);
  EXPECT_TRUE(result_->events.empty() ||
              std::ranges::none_of(result_->events, [](const RunEvent& e) {
                return e.kind == EventKind::kExcluded;
              }));
}

TEST(DeterminismTest, SameSeedSameRun) {
  ExperimentConfig c = SmallConfig();
  c.protocol.rounds = 2;
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation a, MakeSim(c, 4));
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation b, MakeSim(c, 4));
  ASSERT_OK_AND_ASSIGN(FdpddlResult ra, a.Run());
  ASSERT_OK_AND_ASSIGN(FdpddlResult rb, b.Run());
  EXPECT_EQ(ra.rounds, rb.rounds);
  EXPECT_EQ(ra.credibility, rb.credibility);
  EXPECT_EQ(ra.leave_one_out, rb.leave_one_out);
  EXPECT_EQ(ra.final_accuracy, rb.final_accuracy);
  ASSERT_EQ(ra.chain.size(), rb.chain.size());
  for (size_t i = 0; i < ra.chain.size(); ++i) EXPECT_EQ(ra.chain[i], rb.chain[i]);
}

TEST(ExclusionTest, ExcludedPartyLeavesTheChain) {
  ExperimentConfig c = SmallConfig();
  c.adversaries = {{.party = 3}};
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(c, 1));
  ASSERT_OK_AND_ASSIGN(FdpddlResult r, sim.Run());
  ASSERT_TRUE(std::ranges::any_of(r.events, [](const RunEvent& e) {
    return e.kind == EventKind::kExcluded;
  }));
  for (const RunEvent& e : r.events) {
    if (e.kind != EventKind::kExcluded) continue;
    for (size_t b = static_cast<size_t>(e.round) + 2; b < r.chain.size(); ++b) {
      for (const Transaction& tx : r.chain[b].transactions) {
        EXPECT_FALSE(Mentions(tx, e.party)) << "party " << e.party << " block " << b;
      }
    }
    for (const RoundRecord& rec : r.rounds) {
      if (rec.party == e.party && rec.round >= e.round) EXPECT_FALSE(rec.credible);
    }
  }
}

TEST(ExclusionTest, ScaleZeroGradientsBuyNothingUseful) {
  // A zero update has no leave-one-out impact.
  ExperimentConfig c = SmallConfig();
  c.protocol.rounds = 1;
  c.adversaries = {{.party = 3, .kind = AdversaryKind::kFreeRiderRandomGrad,
                    .scale = 0}};
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(c, 1));
  ASSERT_OK_AND_ASSIGN(FdpddlResult r, sim.Run());
  for (const LeaveOneOutRecord& l : r.leave_one_out) {
    if (l.seller == 3) {
      EXPECT_EQ(l.accuracy, l.accuracy_without);
      EXPECT_DOUBLE_EQ(l.factor, 0.5);
    }
  }
}

// ---------------------------------------------------------------- membership

TEST(MembershipTest, JoinMintsTokensAndReinitialises) {
  ExperimentConfig c = SmallConfig();
  ASSERT_OK_AND_ASSIGN(CellData cell, BuildCell(c, 5));
  PartyInput newcomer = cell.parties.back();
  cell.parties.pop_back();
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim,
                       FdpddlSimulation::Create(c, cell.parties, cell.test, 5));
  ASSERT_OK(sim.RunInitialisation().status());
  ASSERT_OK(sim.RunUpdateRound());
  ASSERT_OK_AND_ASSIGN(PartyId id, sim.Join(newcomer));
  EXPECT_EQ(id, 3u);
  EXPECT_TRUE(sim.credible().count(id));
  EXPECT_TRUE(sim.ledger().state().IsRegistered(id));
  ASSERT_OK_AND_ASSIGN(int64_t tokens, InitTokens(0.1, sim.parameter_count(), 4));
  EXPECT_EQ(sim.ledger().state().Balance(id), tokens);
  EXPECT_TRUE(std::ranges::any_of(sim.events(), [&](const RunEvent& e) {
    return e.kind == EventKind::kJoined && e.party == id;
  }));
  ASSERT_OK(sim.RunUpdateRound());
  EXPECT_OK(CheckChain(sim.ledger().blocks()));
  for (PartyId i : sim.credible()) {
    if (i != id) EXPECT_TRUE(sim.parties()[i].credibility.Contains(id));
  }
}

TEST(MembershipTest, DepartRemovesPartyFromLists) {
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(SmallConfig(), 1));
  ASSERT_OK(sim.RunInitialisation().status());
  ASSERT_OK(sim.Depart(2));
  EXPECT_FALSE(sim.credible().count(2));
  for (PartyId i : sim.credible()) {
    EXPECT_FALSE(sim.parties()[i].credibility.Contains(2));
    EXPECT_NEAR(sim.parties()[i].credibility.Sum(), 1.0, 1e-9);
  }
  const size_t before = sim.ledger().blocks().size();
  ASSERT_OK(sim.RunUpdateRound());
  for (const Transaction& tx : sim.ledger().blocks()[before].transactions) {
    EXPECT_FALSE(Mentions(tx, 2));
  }
  EXPECT_TRUE(absl::IsNotFound(sim.Depart(2)));
  EXPECT_TRUE(absl::IsNotFound(sim.Depart(17)));
}

TEST(MembershipTest, SlowSellerIsRefunded) {
  ExperimentConfig c = SmallConfig();
  c.protocol.latency = {0, 0, 0, 5};
  c.protocol.timeout = 1;
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim, MakeSim(c, 1));
  ASSERT_OK(sim.RunInitialisation().status());
  ASSERT_OK(sim.RunUpdateRound());
  const Block& block = sim.ledger().blocks().back();
  std::set<Hash> orders_to_slow, refunded;
  for (const Transaction& tx : block.transactions) {
    if (tx.kind == TxKind::kPurchaseOrder && tx.counterparty == 3) {
      orders_to_slow.insert(tx.Id());
    }
    if (tx.kind == TxKind::kFulfillment) EXPECT_NE(tx.author, 3u);
    if (tx.kind == TxKind::kTokenTransfer) refunded.insert(tx.order_ref);
  }
  EXPECT_FALSE(orders_to_slow.empty());
  EXPECT_EQ(orders_to_slow, refunded);
  EXPECT_TRUE(sim.ledger().state().OpenOrders().empty());
  EXPECT_OK(CheckChain(sim.ledger().blocks()));
}

// ---------------------------------------------------------------- baselines

TEST(BaselineTest, StandaloneIgnoresOtherParties) {
  ExperimentConfig c = SmallConfig();
  ASSERT_OK_AND_ASSIGN(CellData cell, BuildCell(c, 1));
  ASSERT_OK_AND_ASSIGN(BaselineResult a, RunStandalone(c, cell.parties, cell.test, 1));
  std::vector<PartyInput> swapped = cell.parties;
  swapped[1].data = cell.parties[2].data;
  swapped[3].data = cell.parties[2].data;
  ASSERT_OK_AND_ASSIGN(BaselineResult b, RunStandalone(c, swapped, cell.test, 1));
  EXPECT_EQ(a.standalone_accuracy[0], b.standalone_accuracy[0]);
  EXPECT_EQ(a.final_accuracy[0], b.final_accuracy[0]);
  EXPECT_EQ(a.final_accuracy[2], b.final_accuracy[2]);
  ASSERT_EQ(a.trace.size(), c.protocol.rounds);
  for (size_t t = 0; t < a.trace.size(); ++t) EXPECT_EQ(a.trace[t][0], b.trace[t][0]);
}

TEST(BaselineTest, StandaloneMatchesFdpddlPretraining) {
  ExperimentConfig c = SmallConfig();
  ASSERT_OK_AND_ASSIGN(CellData cell, BuildCell(c, 2));
  ASSERT_OK_AND_ASSIGN(BaselineResult s, RunStandalone(c, cell.parties, cell.test, 2));
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim,
                       FdpddlSimulation::Create(c, cell.parties, cell.test, 2));
  ASSERT_OK(sim.Pretrain());
  for (size_t i = 0; i < cell.parties.size(); ++i) {
    EXPECT_EQ(s.standalone_accuracy[i], sim.parties()[i].standalone_accuracy);
  }
}

TEST(BaselineTest, CentralisedBeatsBestStandaloneOnMedian) {
  ExperimentConfig c = SmallConfig();
  std::vector<double> margins;
  for (uint64_t seed : {1, 2, 3}) {
    ASSERT_OK_AND_ASSIGN(CellData cell, BuildCell(c, seed));
    ASSERT_OK_AND_ASSIGN(BaselineResult s,
                         RunStandalone(c, cell.parties, cell.test, seed));
    ASSERT_OK_AND_ASSIGN(BaselineResult central,
                         RunCentralised(c, cell.parties, cell.test, seed));
    margins.push_back(central.final_accuracy[0] -
                      *std::ranges::max_element(s.final_accuracy));
    // Every party reports the shared model.
    EXPECT_TRUE(std::ranges::all_of(central.final_accuracy, [&](double a) {
      return a == central.final_accuracy[0];
    }));
  }
  std::ranges::sort(margins);
  EXPECT_GE(margins[1], 0.0);
}

TEST(BaselineTest, DssgdSpreadIsBelowFdpddl) {
  ExperimentConfig c = SmallConfig();
  c.partition.setting = 3;
  auto spread = [](const std::vector<double>& v) {
    auto [lo, hi] = std::ranges::minmax(v);
    return hi - lo;
  };
  ASSERT_OK_AND_ASSIGN(CellData cell, BuildCell(c, 1));
  ASSERT_OK_AND_ASSIGN(BaselineResult d, RunDistributed(c, cell.parties, cell.test, 1));
  ASSERT_OK_AND_ASSIGN(FdpddlSimulation sim,
                       FdpddlSimulation::Create(c, cell.parties, cell.test, 1));
  ASSERT_OK_AND_ASSIGN(FdpddlResult f, sim.Run());
  EXPECT_LT(spread(d.final_accuracy), spread(f.final_accuracy));
}

}  // namespace
}  // namespace fairdl

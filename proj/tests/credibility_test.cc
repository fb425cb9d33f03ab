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
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "fairdl/common/rng.h"
#include "fairdl/credibility/allocation.h"
#include "fairdl/credibility/credibility.h"
#include "fairdl/credibility/tokens.h"
#include "fairdl/credibility/voting.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairdl {
namespace {

TEST(InitTokensTest, Formula) {
  EXPECT_EQ(*InitTokens(0.1, 100000, 2), 10000);
  EXPECT_EQ(*InitTokens(0.1, 1000, 4), 300);
  EXPECT_EQ(*InitTokens(0.0, 1000, 4), 0);
  EXPECT_EQ(*InitTokens(0.3, 1386, 5), 1663);  // floor(1663.2)
  EXPECT_FALSE(InitTokens(0.1, 1000, 1).ok());
}

LabelMatrix HandMatrix() {
  return *LabelMatrix::Create({0, 1, 2},
                              {{1, 1, 0}, {2, 2, 2}, {0, 1, 0}, {1, 1, 1}});
}

TEST(MajorityVoteTest, HandCountedRows) {
  EXPECT_EQ(MajorityVote(HandMatrix()), (std::vector<int>{1, 2, 0, 1}));
}

TEST(MajorityVoteTest, Unanimity) {
  ASSERT_OK_AND_ASSIGN(LabelMatrix m,
                       LabelMatrix::Create({3, 5}, {{4, 4}, {0, 0}, {9, 9}}));
  EXPECT_EQ(MajorityVote(m), (std::vector<int>{4, 0, 9}));
}

TEST(MajorityVoteTest, TwoColumnTieRuleExhaustive) {
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      ASSERT_OK_AND_ASSIGN(LabelMatrix m, LabelMatrix::Create({0, 1}, {{a, b}}));
      EXPECT_EQ(MajorityVote(m)[0], std::min(a, b));
    }
  }
}

TEST(MajorityVoteTest, RejectsRaggedRows) {
  EXPECT_FALSE(LabelMatrix::Create({0, 1}, {{1, 2, 3}}).ok());
  EXPECT_FALSE(LabelMatrix::Create({0, 0}, {{1, 2}}).ok());
}

TEST(InitCredibilityTest, MatchFractions) {
  std::map<PartyId, double> raw = InitCredibility(HandMatrix());
  // Majority is [1,2,0,1].
  EXPECT_DOUBLE_EQ(raw[0], 1.0);   // [1,2,0,1]
  EXPECT_DOUBLE_EQ(raw[1], 0.75);  // [1,2,1,1]
  EXPECT_DOUBLE_EQ(raw[2], 0.75);  // [0,2,0,1]
  ASSERT_OK_AND_ASSIGN(LabelMatrix m,
                       LabelMatrix::Create({0, 1, 2}, {{0, 0, 1}, {2, 2, 0}}));
  raw = InitCredibility(m);
  EXPECT_DOUBLE_EQ(raw[0], 1.0);
  EXPECT_DOUBLE_EQ(raw[2], 0.0);
}

TEST(InitCredibilityTest, EmptyReleaseIsUniform) {
  ASSERT_OK_AND_ASSIGN(LabelMatrix m, LabelMatrix::Create({4, 7}, {}));
  std::map<PartyId, double> raw = InitCredibility(m);
  EXPECT_EQ(raw.size(), 2u);
  EXPECT_EQ(raw[4], raw[7]);
}

TEST(ThresholdTest, DefaultValue) {
  EXPECT_NEAR(DefaultThreshold(4), 1.0 / 6.0, 1e-15);
}

TEST(NormalizeTest, Examples) {
  ScreenResult r = NormalizeAndScreen(0, {{1, 0.6}, {2, 0.2}}, DefaultThreshold(4));
  EXPECT_DOUBLE_EQ(r.list.Get(1), 0.75);
  EXPECT_DOUBLE_EQ(r.list.Get(2), 0.25);
  EXPECT_TRUE(r.reports.empty());

  ScreenResult eq = NormalizeAndScreen(0, {{1, 0.5}, {2, 0.5}, {3, 0.5}},
                                       DefaultThreshold(4));
  for (PartyId p : {1u, 2u, 3u}) EXPECT_DOUBLE_EQ(eq.list.Get(p), 1.0 / 3);
  EXPECT_TRUE(eq.reports.empty());

  ScreenResult low = NormalizeAndScreen(0, {{1, 0.9}, {2, 0.9}, {3, 0.1}},
                                        DefaultThreshold(4));
  EXPECT_EQ(low.reports, std::vector<PartyId>{3});

  ScreenResult zero = NormalizeAndScreen(0, {{1, 0}, {2, 0}}, 0.1);
  EXPECT_EQ(zero.reports, (std::vector<PartyId>{1, 2}));
  EXPECT_TRUE(zero.list.values().empty());
}

TEST(NormalizeTest, SumsToOne) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::map<PartyId, double> raw;
    const int n = 1 + static_cast<int>(rng.UniformIndex(20));
    for (int p = 0; p < n; ++p) raw[p] = rng.Uniform();
    EXPECT_NEAR(NormalizeAndScreen(99, raw, 0.01).list.Sum(), 1.0, 1e-9);
  }
}

TEST(ConsensusTest, StrictMajority) {
  CredibleSet all = {0, 1, 2, 3};
  ASSERT_OK_AND_ASSIGN(CredibleSet a,
                       ConsensusExclude({{0, {3}}, {1, {3}}, {2, {3}}}, all));
  EXPECT_EQ(a, (CredibleSet{0, 1, 2}));
  ASSERT_OK_AND_ASSIGN(CredibleSet b, ConsensusExclude({{0, {3}}, {1, {3}}}, all));
  EXPECT_EQ(b, all);
  ASSERT_OK_AND_ASSIGN(CredibleSet c, ConsensusExclude({}, all));
  EXPECT_EQ(c, all);
}

TEST(ConsensusTest, ReportsFromExcludedPartiesIgnored) {
  CredibleSet set = {0, 1, 2, 3, 4};
  // 4 is in the set but reporter 9 is not.
  ASSERT_OK_AND_ASSIGN(CredibleSet out,
                       ConsensusExclude({{9, {0}}, {1, {0}}, {2, {0}}}, set));
  EXPECT_EQ(out, set);
}

TEST(ConsensusTest, IdempotentOnRandomReports) {
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    CredibleSet set;
    std::map<PartyId, std::set<PartyId>> reports;
    const size_t n = 2 + rng.UniformIndex(7);
    for (PartyId p = 0; p < n; ++p) set.insert(p);
    for (PartyId p = 0; p < n; ++p)
      for (PartyId q = 0; q < n; ++q)
        if (p != q && rng.Uniform() < 0.35) reports[p].insert(q);
    absl::StatusOr<CredibleSet> once = ConsensusExclude(reports, set);
    if (!once.ok()) continue;
    ASSERT_OK_AND_ASSIGN(CredibleSet twice, ConsensusExclude(reports, *once));
    EXPECT_EQ(twice, *once);
    for (PartyId p : *once) EXPECT_TRUE(set.count(p));
  }
}

TEST(ConsensusTest, RefusesToEmptySet) {
  EXPECT_FALSE(
      ConsensusExclude({{0, {1, 2}}, {1, {0, 2}}, {2, {0, 1}}}, {0, 1, 2}).ok());
  // Mutual reports between two parties are not a strict majority.
  ASSERT_OK_AND_ASSIGN(CredibleSet pair, ConsensusExclude({{0, {1}}, {1, {0}}}, {0, 1}));
  EXPECT_EQ(pair.size(), 2u);
}

TEST(DownloadAllocationTest, Examples) {
  EXPECT_EQ(DownloadAllocation(0.3, 100, 0.1, 500), 30);
  EXPECT_EQ(DownloadAllocation(0.8, 100, 0.1, 500), 50);
  EXPECT_EQ(DownloadAllocation(0.0, 100, 0.1, 500), 0);
  EXPECT_TRUE(DownloadGuard(99, 100));
  EXPECT_FALSE(DownloadGuard(100, 100));
}

TEST(SupplementTest, Examples) {
  EXPECT_TRUE(Supplement({100, {{1, 60}, {2, 40}}, {{1, 100}, {2, 100}},
                          {{1, 0.5}, {2, 0.5}}, 1000})
                  .empty());
  auto single = Supplement({25, {{1, 0}}, {{1, 40}}, {{1, 0.3}}, 1000});
  EXPECT_EQ(single, (std::map<PartyId, int64_t>{{1, 25}}));
  auto split = Supplement({30, {{1, 0}, {2, 0}}, {{1, 100}, {2, 100}},
                           {{1, 2.0 / 3}, {2, 1.0 / 3}}, 1000});
  EXPECT_EQ(split, (std::map<PartyId, int64_t>{{1, 20}, {2, 10}}));
  // Token limit binds.
  auto limited = Supplement({30, {{1, 0}}, {{1, 100}}, {{1, 1.0}}, 7});
  EXPECT_EQ(limited, (std::map<PartyId, int64_t>{{1, 7}}));
}

// Oracle: continuous targets by bisection on the fill level, then the
// integer vector closest in squared error, preferring extra units for lower
// ids, found by exhaustive enumeration.
std::map<PartyId, int64_t> OracleSupplement(const SupplementRequest& req) {
  int64_t taken = 0;
  for (const auto& [p, d] : req.allocated) taken += d;
  const int64_t gap = req.budget - taken;
  std::vector<PartyId> ids;
  std::vector<double> w;
  std::vector<int64_t> spare;
  for (const auto& [p, cap] : req.capacity) {
    const int64_t r = cap - (req.allocated.count(p) ? req.allocated.at(p) : 0);
    const double c = req.credibility.count(p) ? req.credibility.at(p) : 0.0;
    if (r > 0 && c > 0) {
      ids.push_back(p);
      w.push_back(c);
      spare.push_back(r);
    }
  }
  const int64_t total = std::min(
      {gap, std::accumulate(spare.begin(), spare.end(), int64_t{0}), req.token_limit});
  if (total <= 0) return {};
  auto filled = [&](double level) {
    double s = 0;
    for (size_t k = 0; k < ids.size(); ++k)
      s += std::min<double>(spare[k], level * w[k]);
    return s;
  };
  double lo = 0, hi = 1;
  while (filled(hi) < total) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    (filled(mid) < total ? lo : hi) = mid;
  }
  std::vector<double> t(ids.size());
  for (size_t k = 0; k < ids.size(); ++k) t[k] = std::min<double>(spare[k], hi * w[k]);

  std::vector<int64_t> cur(ids.size()), best;
  double best_cost = 1e300;
  std::function<void(size_t, int64_t)> rec = [&](size_t k, int64_t left) {
    if (k == ids.size()) {
      if (left != 0) return;
      double cost = 0;
      for (size_t i = 0; i < ids.size(); ++i) cost += std::pow(cur[i] - t[i], 2);
      if (cost < best_cost - 1e-7 || (std::fabs(cost - best_cost) <= 1e-7 && cur > best)) {
        best_cost = std::min(best_cost, cost);
        best = cur;
      }
      return;
    }
    for (int64_t a = 0; a <= std::min(spare[k], left); ++a) {
      cur[k] = a;
      rec(k + 1, left - a);
    }
  };
  rec(0, total);
  std::map<PartyId, int64_t> out;
  for (size_t k = 0; k < ids.size(); ++k)
    if (best[k] > 0) out[ids[k]] = best[k];
  return out;
}

TEST(SupplementTest, MatchesOracleOnRandomCases) {
  Rng rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    SupplementRequest req;
    const size_t peers = 1 + rng.UniformIndex(4);
    int64_t base = 0;
    for (PartyId p = 1; p <= peers; ++p) {
      const int64_t cap = static_cast<int64_t>(rng.UniformIndex(8));
      const int64_t alloc = cap == 0 ? 0 : static_cast<int64_t>(rng.UniformIndex(cap + 1));
      req.capacity[p] = cap;
      req.allocated[p] = alloc;
      base += alloc;
      // Coarse grid so exact ties between fractional parts occur.
      req.credibility[p] = rng.Uniform() < 0.15 ? 0.0 : (1 + rng.UniformIndex(4)) / 4.0;
    }
    req.budget = base + static_cast<int64_t>(rng.UniformIndex(14));
    req.token_limit = static_cast<int64_t>(rng.UniformIndex(20));
    auto got = Supplement(req);
    EXPECT_EQ(got, OracleSupplement(req)) << "trial " << trial;
    int64_t extra = 0;
    for (const auto& [p, a] : got) {
      EXPECT_LE(a, req.capacity[p] - req.allocated[p]);
      extra += a;
    }
    EXPECT_LE(base + extra, std::max(req.budget, base));
    EXPECT_LE(extra, std::max<int64_t>(req.token_limit, 0));
  }
}

TEST(SigmoidTest, Values) {
  EXPECT_EQ(CredibilitySigmoid(0.5), 0.5);
  EXPECT_NEAR(CredibilitySigmoid(0.6), 0.817574476193643659607, 1e-15);
  EXPECT_DOUBLE_EQ(UpdateCredibility(0.5, 0.8, 0.8), 0.5);
  EXPECT_DOUBLE_EQ(AccuracyFactor(0.7, 0.7), 0.5);
  EXPECT_LT(CredibilitySigmoid(AccuracyFactor(0.6, 0.7)), 0.5);
  EXPECT_DOUBLE_EQ(AccuracyFactor(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(UpdateCredibility(0.2, 0, 0), 0.35);
}

TEST(SigmoidTest, MonotoneAndSymmetric) {
  double prev = CredibilitySigmoid(0);
  for (int k = 1; k <= 1000; ++k) {
    const double x = k / 1000.0;
    const double f = CredibilitySigmoid(x);
    EXPECT_GT(f, prev);
    EXPECT_NEAR(f + CredibilitySigmoid(1 - x), 1.0, 1e-15);
    prev = f;
  }
}

TEST(SigmoidTest, AveragingIsContraction) {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const double c = rng.Uniform(), acc = rng.Uniform(), acc_j = rng.Uniform();
    const double f = CredibilitySigmoid(AccuracyFactor(acc, acc_j));
    const double next = UpdateCredibility(c, acc, acc_j);
    EXPECT_LE(std::fabs(next - f), std::fabs(c - f) + 1e-15);
    EXPECT_GE(next, std::min(c, f) - 1e-15);
    EXPECT_LE(next, std::max(c, f) + 1e-15);
  }
}

TEST(SettleTokensTest, Transfers) {
  TokenAccount buyer{0, 300}, seller{1, 300};
  ASSERT_OK(SettleTokens(buyer, seller, 30));
  EXPECT_EQ(buyer.balance, 270);
  EXPECT_EQ(seller.balance, 330);
  ASSERT_OK(SettleTokens(buyer, seller, 270));
  EXPECT_EQ(buyer.balance, 0);
  EXPECT_FALSE(SettleTokens(buyer, seller, 1).ok());
  EXPECT_EQ(buyer.balance, 0);
  EXPECT_EQ(seller.balance, 600);
}

TEST(SettleTokensTest, Conservation) {
  Rng rng(4);
  std::vector<TokenAccount> accounts;
  for (PartyId p = 0; p < 5; ++p) accounts.push_back({p, 500});
  for (int t = 0; t < 5000; ++t) {
    const size_t a = rng.UniformIndex(5), b = rng.UniformIndex(5);
    if (a == b) continue;
    (void)SettleTokens(accounts[a], accounts[b], rng.UniformIndex(200));
    int64_t sum = 0;
    for (const auto& acc : accounts) {
      EXPECT_GE(acc.balance, 0);
      sum += acc.balance;
    }
    ASSERT_EQ(sum, 2500);
  }
}

}  // namespace
}  // namespace fairdl

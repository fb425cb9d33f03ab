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

#include <cmath>
#include <vector>

#include "fairdl/numerics/dataset.h"
#include "fairdl/privacy/accountant.h"
#include "fairdl/privacy/dp_sgd.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairdl {
namespace {

PrivacyAccountant Unlimited(CompositionStrategy s = CompositionStrategy::kBasic) {
  return *PrivacyAccountant::Create({1e9, 0.5}, s);
}

Dataset SmallData(size_t n, uint64_t seed) {
  BlobSpec spec;
  spec.num_classes = 3;
  spec.dim = 4;
  BlobTask task = BlobTask::Create(spec, seed);
  Rng rng(seed + 1);
  return task.Sample(n, rng);
}

TEST(CalibrateSigmaTest, MatchesHighPrecisionValue) {
  // 30-digit evaluation of sqrt(2 ln(1.25e5)).
  EXPECT_NEAR(*CalibrateSigma(1.0, 1e-5), 4.84480526260538942125864215759,
              1e-12);
  EXPECT_NEAR(*CalibrateSigma(0.5, 1e-6), 10.5976050537009479026252698089,
              1e-12);
}

TEST(CalibrateSigmaTest, CleanInverse) {
  EXPECT_NEAR(*CalibrateSigma(1.0, 1.25 * std::exp(-0.5)), 1.0, 1e-15);
}

TEST(CalibrateSigmaTest, StrictlyDecreasingInEpsilon) {
  double prev = *CalibrateSigma(0.05, 1e-5);
  for (double eps = 0.1; eps <= 1.0; eps += 0.05) {
    const double s = *CalibrateSigma(eps, 1e-5);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(CalibrateSigmaTest, RoundTrip) {
  for (double eps : {0.01, 0.3, 0.77, 1.0}) {
    for (double delta : {1e-9, 1e-5, 0.3}) {
      const double sigma = *CalibrateSigma(eps, delta);
      EXPECT_NEAR(std::sqrt(2 * std::log(1.25 / delta)) / sigma, eps, 1e-12);
    }
  }
}

TEST(CalibrateSigmaTest, RejectsInvalid) {
  EXPECT_FALSE(CalibrateSigma(1.5, 1e-5).ok());
  EXPECT_FALSE(CalibrateSigma(0, 1e-5).ok());
  EXPECT_FALSE(CalibrateSigma(0.5, 0).ok());
  EXPECT_FALSE(CalibrateSigma(0.5, 1).ok());
}

TEST(ClipTest, Examples) {
  std::vector<DenseGradient> in = {
      {{0.3, 0.4}}, {{3, 4}}, {{0, 0, 0}}};
  std::vector<DenseGradient> out = ClipPerExample(in, 1.0);
  EXPECT_EQ(out[0].values, in[0].values);
  EXPECT_DOUBLE_EQ(out[1].values[0], 0.6);
  EXPECT_DOUBLE_EQ(out[1].values[1], 0.8);
  EXPECT_EQ(out[2].values, std::vector<double>(3, 0.0));
}

TEST(ClipTest, NormsBounded) {
  Rng rng(1);
  std::vector<DenseGradient> in(200, DenseGradient{std::vector<double>(7)});
  for (auto& g : in) {
    const double scale = std::exp(rng.Uniform(-5, 5));
    for (double& v : g.values) v = rng.Normal(0, scale);
  }
  for (double c : {1e-3, 0.5, 1.0, 40.0}) {
    for (const auto& g : ClipPerExample(in, c)) EXPECT_LE(g.Norm(), c + 1e-9);
  }
}

TEST(ComposeTest, Examples) {
  std::vector<StepRecord> three(3, StepRecord{0.1, 1e-6, 1.0});
  PrivacyCost basic = ComposeSpent(three, CompositionStrategy::kBasic);
  EXPECT_NEAR(basic.epsilon, 0.3, 1e-15);
  EXPECT_NEAR(basic.delta, 3e-6, 1e-21);
  std::vector<StepRecord> one = {{1.0, 1e-5, 0.1}};
  PrivacyCost amp = ComposeSpent(one, CompositionStrategy::kAmplifiedBasic);
  EXPECT_NEAR(amp.epsilon, 0.1, 1e-15);
  EXPECT_NEAR(amp.delta, 1e-6, 1e-21);
  EXPECT_EQ(ComposeSpent({}, CompositionStrategy::kBasic), (PrivacyCost{0, 0}));
  EXPECT_EQ(ComposeSpent({}, CompositionStrategy::kAmplifiedBasic),
            (PrivacyCost{0, 0}));
}

TEST(ComposeTest, MonotoneAndAmplifiedBelowBasic) {
  Rng rng(3);
  std::vector<StepRecord> steps;
  PrivacyCost prev_basic, prev_amp;
  for (int i = 0; i < 100; ++i) {
    steps.push_back({rng.Uniform(0.01, 1), rng.Uniform(0, 1e-6),
                     rng.Uniform(0.01, 0.99)});
    PrivacyCost b = ComposeSpent(steps, CompositionStrategy::kBasic);
    PrivacyCost a = ComposeSpent(steps, CompositionStrategy::kAmplifiedBasic);
    EXPECT_GE(b.epsilon, prev_basic.epsilon);
    EXPECT_GE(b.delta, prev_basic.delta);
    EXPECT_GE(a.epsilon, prev_amp.epsilon);
    EXPECT_GE(a.delta, prev_amp.delta);
    EXPECT_LE(a.epsilon, b.epsilon);
    prev_basic = b;
    prev_amp = a;
  }
}

TEST(AllocateBudgetTest, StageBudgets) {
  EXPECT_EQ(AllocateBudget(BudgetStage::kUpdate, "mnist"), (PrivacyCost{2, 1e-5}));
  EXPECT_EQ(AllocateBudget(BudgetStage::kInitialisation, "svhn"),
            (PrivacyCost{4, 1e-6}));
  EXPECT_EQ(AllocateBudget(BudgetStage::kUpdate, "SVHN").delta, 1e-6);
  EXPECT_EQ(AllocateBudget(BudgetStage::kUpdate, "no-such-set"),
            (PrivacyCost{2, 1e-5}));
  PrivacyCost init = AllocateBudget(BudgetStage::kInitialisation, "mnist");
  PrivacyCost upd = AllocateBudget(BudgetStage::kUpdate, "mnist");
  std::vector<StepRecord> both = {{init.epsilon, init.delta, 1},
                                  {upd.epsilon, upd.delta, 1}};
  PrivacyCost total = ComposeSpent(both, CompositionStrategy::kBasic);
  EXPECT_DOUBLE_EQ(total.epsilon, 6);
  EXPECT_DOUBLE_EQ(total.delta, 2e-5);
}

TEST(AccountantTest, RefusesOverspendAndStaysExhausted) {
  ASSERT_OK_AND_ASSIGN(PrivacyAccountant acc,
                       PrivacyAccountant::Create({1.0, 1e-5},
                                                 CompositionStrategy::kBasic));
  for (int i = 0; i < 10; ++i) ASSERT_OK(acc.Record({0.1, 1e-6, 1}));
  EXPECT_FALSE(acc.exhausted());
  EXPECT_EQ(acc.Record({0.1, 1e-6, 1}).code(),
            absl::StatusCode::kResourceExhausted);
  EXPECT_TRUE(acc.exhausted());
  EXPECT_EQ(acc.step_count(), 10u);
  // Even a tiny step is refused afterwards.
  EXPECT_FALSE(acc.Record({1e-9, 0, 1}).ok());
  EXPECT_TRUE(acc.exhausted());
}

TEST(AccountantTest, JsonRoundTrip) {
  ASSERT_OK_AND_ASSIGN(
      PrivacyAccountant acc,
      PrivacyAccountant::Create({2.0, 1e-5}, CompositionStrategy::kAmplifiedBasic));
  ASSERT_OK(acc.Record({0.7, 1e-7, 0.125}));
  ASSERT_OK(acc.Record({0.3, 3e-7, 0.5}));
  ASSERT_OK_AND_ASSIGN(PrivacyAccountant back,
                       PrivacyAccountant::FromJson(acc.ToJson()));
  EXPECT_EQ(back, acc);
  EXPECT_FALSE(PrivacyAccountant::FromJson("{\"strategy\":\"rdp\"}").ok());
  EXPECT_FALSE(PrivacyAccountant::FromJson("not json").ok());
}

TEST(DpSgdTest, ZeroNoiseEqualsClippedLotMean) {
  Dataset data = SmallData(20, 4);
  Rng init(5);
  ASSERT_OK_AND_ASSIGN(MlpModel model, MlpModel::CreateRandom({4, 5, 3}, init));
  PrivacyParams p{1.0, 1e-5, 0.05, 6, 20, 0.0};
  PrivacyAccountant acc = Unlimited();
  Rng rng(9), replay(9);
  ASSERT_OK_AND_ASSIGN(DenseGradient g, DpSgdStep(model, data, p, acc, rng));
  // Re-derive the lot independently from the same stream.
  std::vector<size_t> lot(6);
  for (size_t& i : lot) i = replay.UniformIndex(20);
  std::vector<double> expected(model.parameter_count(), 0.0);
  for (size_t i : lot) {
    ASSERT_OK_AND_ASSIGN(DenseGradient e, Backward(model, data.Subset(std::vector<size_t>{i})));
    const double norm = e.Norm();
    const double scale = norm > 0.05 ? 0.05 / norm : 1.0;
    for (size_t k = 0; k < e.size(); ++k) expected[k] += e.values[k] * scale / 6;
  }
  for (size_t k = 0; k < expected.size(); ++k) {
    EXPECT_NEAR(g.values[k], expected[k], 1e-14);
  }
}

TEST(DpSgdTest, NoiseStdMatchesCalibration) {
  Dataset data = SmallData(10, 6);
  ASSERT_OK_AND_ASSIGN(MlpModel model, MlpModel::Create({4, 3}));
  PrivacyParams noisy{1.0, 1e-5, 1.0, 5, 10, 1.0};
  PrivacyParams silent = noisy;
  silent.noise_scale = 0;
  PrivacyAccountant acc = Unlimited();
  Rng rng(12);
  double sum = 0, sum_sq = 0;
  size_t count = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    Rng twin = rng;
    ASSERT_OK_AND_ASSIGN(DenseGradient clean, DpSgdStep(model, data, silent, acc, twin));
    ASSERT_OK_AND_ASSIGN(DenseGradient g, DpSgdStep(model, data, noisy, acc, rng));
    for (size_t k = 0; k < g.size(); ++k) {
      const double z = g.values[k] - clean.values[k];
      sum += z;
      sum_sq += z * z;
      ++count;
    }
  }
  const double mean = sum / count;
  const double sd = std::sqrt(sum_sq / count - mean * mean);
  const double target = 4.84480526260538942 * 1.0 / 5.0;
  EXPECT_NEAR(sd / target, 1.0, 0.05);
}

TEST(DpSgdTest, LedgerCountsAndRefusal) {
  Dataset data = SmallData(16, 7);
  ASSERT_OK_AND_ASSIGN(MlpModel model, MlpModel::Create({4, 3}));
  PrivacyParams p{0.5, 1e-6, 1.0, 4, 16, 1.0};
  ASSERT_OK_AND_ASSIGN(PrivacyAccountant acc,
                       PrivacyAccountant::Create({2.0, 1e-5},
                                                 CompositionStrategy::kBasic));
  Rng rng(1);
  for (int k = 0; k < 4; ++k) ASSERT_OK(DpSgdStep(model, data, p, acc, rng).status());
  EXPECT_EQ(acc.step_count(), 4u);
  EXPECT_EQ(DpSgdStep(model, data, p, acc, rng).status().code(),
            absl::StatusCode::kResourceExhausted);
  EXPECT_TRUE(acc.exhausted());
}

TEST(DpSgdTest, BitReproducible) {
  Dataset data = SmallData(30, 8);
  Rng init(2);
  ASSERT_OK_AND_ASSIGN(MlpModel model, MlpModel::CreateRandom({4, 6, 3}, init));
  PrivacyParams p{0.8, 1e-6, 1.0, 5, 30, 1.0};
  PrivacyAccountant a1 = Unlimited(), a2 = Unlimited();
  Rng r1(77), r2(77);
  ASSERT_OK_AND_ASSIGN(DenseGradient g1, DpSgdStep(model, data, p, a1, r1));
  ASSERT_OK_AND_ASSIGN(DenseGradient g2, DpSgdStep(model, data, p, a2, r2));
  EXPECT_EQ(g1.values, g2.values);
}

TEST(DpSgdTest, ValidatesParams) {
  Dataset data = SmallData(10, 9);
  ASSERT_OK_AND_ASSIGN(MlpModel model, MlpModel::Create({4, 3}));
  PrivacyAccountant acc = Unlimited();
  Rng rng(1);
  EXPECT_FALSE(DpSgdStep(model, data, {1.5, 1e-6, 1, 2, 10, 1}, acc, rng).ok());
  EXPECT_FALSE(DpSgdStep(model, data, {1, 1e-6, 1, 11, 10, 1}, acc, rng).ok());
  EXPECT_FALSE(DpSgdStep(model, data, {1, 1e-6, 1, 2, 9, 1}, acc, rng).ok());
  EXPECT_EQ(acc.step_count(), 0u);
}

TEST(DpTrainTest, StopsWhenBudgetUsedUp) {
  Dataset data = SmallData(40, 10);
  Rng init(3);
  ASSERT_OK_AND_ASSIGN(MlpModel model, MlpModel::CreateRandom({4, 6, 3}, init));
  PrivacyParams p{1.0, 1e-6, 1.0, 8, 40, 1.0};  // q = 0.2
  ASSERT_OK_AND_ASSIGN(
      PrivacyAccountant acc,
      PrivacyAccountant::Create({2.0, 1e-5}, CompositionStrategy::kAmplifiedBasic));
  uint64_t step = 0;
  Rng rng(4);
  ASSERT_OK_AND_ASSIGN(DpTrainResult r,
                       DpTrain(model, data, p, InverseTimeDecay{}, 1000, step, acc, rng));
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.steps, 10u);
  EXPECT_EQ(step, 10u);
}

}  // namespace
}  // namespace fairdl

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
#include <set>
#include <vector>

#include "fairdl/numerics/dataset.h"
#include "fairdl/samplegen/augment.h"
#include "fairdl/samplegen/release.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairdl {
namespace {

Dataset Blobs(size_t n, uint64_t seed, int dim = 16) {
  BlobSpec spec;
  spec.dim = dim;
  spec.num_classes = 4;
  BlobTask task = BlobTask::Create(spec, seed);
  Rng rng(seed * 7 + 1);
  return task.Sample(n, rng);
}

PrivacyAccountant InitBudget() {
  return *PrivacyAccountant::Create({4, 1e-5}, CompositionStrategy::kBasic);
}

TEST(AugmentTest, IdentityConfig) {
  Dataset d = Blobs(30, 1);
  Rng rng(1);
  ASSERT_OK_AND_ASSIGN(Dataset out, Augment(d, AugmentConfig{}, rng));
  EXPECT_EQ(out, d);
  AugmentConfig image{AugmentKind::kImage, 0, 0, 1};
  ASSERT_OK_AND_ASSIGN(Dataset img, Augment(d, image, rng));
  EXPECT_EQ(img, d);
}

TEST(AugmentTest, TabularHundredfold) {
  Dataset d = Blobs(370, 2);
  Rng rng(1);
  AugmentConfig cfg{AugmentKind::kTabular, 0, 0, 100};
  ASSERT_OK_AND_ASSIGN(Dataset out, Augment(d, cfg, rng));
  EXPECT_EQ(out.size(), 37000u);
  std::vector<size_t> before = d.ClassCounts(), after = out.ClassCounts();
  for (size_t c = 0; c < before.size(); ++c) EXPECT_EQ(after[c], 100 * before[c]);
  for (size_t r = 0; r < out.size(); r += 997) {
    std::span<const double> a = out.features.row(r);
    std::span<const double> b = d.features.row(r % 370);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(AugmentTest, ImageModeResamplesExistingPixels) {
  Dataset d = Blobs(20, 3, 64);  // 8x8 images
  Rng rng(5);
  AugmentConfig cfg{AugmentKind::kImage, 30, 0.1, 5};
  ASSERT_OK_AND_ASSIGN(Dataset out, Augment(d, cfg, rng));
  ASSERT_EQ(out.size(), 100u);
  bool changed = false;
  for (size_t r = 0; r < out.size(); ++r) {
    std::span<const double> src = d.features.row(r % 20);
    std::set<double> pool(src.begin(), src.end());
    pool.insert(0.0);
    for (double v : out.features.row(r)) EXPECT_TRUE(pool.count(v));
    changed |= !std::equal(src.begin(), src.end(), out.features.row(r).begin());
    EXPECT_EQ(out.labels[r], d.labels[r % 20]);
  }
  EXPECT_TRUE(changed);
}

TEST(AugmentTest, RejectsNonSquareImages) {
  Dataset d = Blobs(5, 4, 10);
  Rng rng(1);
  EXPECT_FALSE(Augment(d, {AugmentKind::kImage, 1, 0.01, 2}, rng).ok());
  EXPECT_FALSE(Augment(d, {AugmentKind::kTabular, 0, 0, 0}, rng).ok());
}

TEST(ReleaseTest, CountFollowsSharingLevel) {
  EXPECT_EQ(ReleaseCount(0.1, 600), 60u);
  for (size_t n : {7u, 100u, 333u, 600u}) {
    for (double lambda : {0.05, 0.1, 0.2, 0.3, 0.45}) {
      const double u1 = static_cast<double>(ReleaseCount(lambda, n));
      const double u2 = static_cast<double>(ReleaseCount(2 * lambda, n));
      EXPECT_GE(u2, 2 * u1);
      EXPECT_LE(u2, 2 * u1 + 1);
    }
  }
}

TEST(ReleaseTest, GeneratesCountAndDebitsBudget) {
  Dataset d = Blobs(600, 5);
  NoisyPrototypeGenerator gen(PrototypeOptions{});
  PrivacyAccountant acc = InitBudget();
  Rng rng(3);
  ASSERT_OK_AND_ASSIGN(SampleRelease rel, gen.Generate(2, d, 0.1, acc, rng));
  EXPECT_EQ(rel.count(), 60u);
  EXPECT_EQ(rel.releaser(), 2u);
  EXPECT_EQ(acc.step_count(), 1u);
  EXPECT_DOUBLE_EQ(acc.Spent().epsilon, 1.0);
  for (double v : rel.samples().data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ReleaseTest, ZeroNoiseGivesExactPrototypes) {
  Dataset d = Blobs(200, 6);
  PrototypeOptions opt;
  opt.noise_scale = 0;
  opt.jitter = 0;
  NoisyPrototypeGenerator gen(opt);
  PrivacyAccountant acc = InitBudget();
  Rng rng(4);
  ASSERT_OK_AND_ASSIGN(SampleRelease rel, gen.Generate(0, d, 0.5, acc, rng));
  // Oracle class means.
  std::vector<std::vector<double>> means(4, std::vector<double>(d.dim(), 0));
  std::vector<double> counts(4, 0);
  for (size_t i = 0; i < d.size(); ++i) {
    counts[d.labels[i]] += 1;
    for (size_t k = 0; k < d.dim(); ++k) means[d.labels[i]][k] += d.features(i, k);
  }
  for (int c = 0; c < 4; ++c)
    for (double& v : means[c]) v /= counts[c];
  for (size_t r = 0; r < rel.count(); ++r) {
    double best = 1e9;
    for (int c = 0; c < 4; ++c) {
      double dist = 0;
      for (size_t k = 0; k < d.dim(); ++k)
        dist = std::max(dist, std::fabs(rel.samples()(r, k) - means[c][k]));
      best = std::min(best, dist);
    }
    EXPECT_LT(best, 1e-12);
  }
}

TEST(ReleaseTest, DeterministicForEqualInputs) {
  Dataset d = Blobs(300, 7);
  NoisyPrototypeGenerator gen(PrototypeOptions{});
  PrivacyAccountant a1 = InitBudget(), a2 = InitBudget();
  Rng r1(99), r2(99);
  ASSERT_OK_AND_ASSIGN(SampleRelease x, gen.Generate(1, d, 0.2, a1, r1));
  ASSERT_OK_AND_ASSIGN(SampleRelease y, gen.Generate(1, d, 0.2, a2, r2));
  EXPECT_EQ(x, y);
}

TEST(ReleaseTest, NeverCopiesRawRows) {
  Dataset d = Blobs(400, 8);
  PrototypeOptions opt;
  opt.jitter = 0;  // rely on the mechanism noise alone
  ASSERT_GT(opt.noise_scale, 0);
  NoisyPrototypeGenerator gen(opt);
  PrivacyAccountant acc = InitBudget();
  Rng rng(2);
  ASSERT_OK_AND_ASSIGN(SampleRelease rel, gen.Generate(0, d, 1.0, acc, rng));
  for (size_t r = 0; r < rel.count(); ++r) {
    for (size_t i = 0; i < d.size(); ++i) {
      std::span<const double> a = rel.samples().row(r);
      std::span<const double> b = d.features.row(i);
      EXPECT_FALSE(std::equal(a.begin(), a.end(), b.begin()));
    }
  }
}

TEST(ReleaseTest, NoiseShrinksWithMultiplicity) {
  Dataset d = Blobs(100, 9);
  PrototypeOptions exact;
  exact.noise_scale = 0;
  Rng r0(1);
  ASSERT_OK_AND_ASSIGN(Matrix truth, NoisyPrototypeGenerator(exact).NoisyPrototypes(d, r0));
  auto error = [&](size_t multiplicity) {
    PrototypeOptions opt;
    opt.multiplicity = multiplicity;
    Rng rng(1);
    Matrix noisy = *NoisyPrototypeGenerator(opt).NoisyPrototypes(d, rng);
    double sq = 0;
    for (size_t i = 0; i < truth.data().size(); ++i)
      sq += std::pow(noisy.data()[i] - truth.data()[i], 2);
    return std::sqrt(sq);
  };
  // Same stream, so the noise vector is exactly rescaled.
  EXPECT_NEAR(error(1) / error(100), 100.0, 1e-6);
}

TEST(ReleaseTest, RefusesWithoutBudget) {
  Dataset d = Blobs(100, 10);
  NoisyPrototypeGenerator gen(PrototypeOptions{});
  ASSERT_OK_AND_ASSIGN(PrivacyAccountant acc,
                       PrivacyAccountant::Create({0.5, 1e-5}, CompositionStrategy::kBasic));
  Rng rng(1);
  EXPECT_EQ(gen.Generate(0, d, 0.1, acc, rng).status().code(),
            absl::StatusCode::kResourceExhausted);
  PrivacyAccountant ok = InitBudget();
  EXPECT_FALSE(gen.Generate(0, d, 0.0, ok, rng).ok());
  EXPECT_FALSE(gen.Generate(0, d, 1.5, ok, rng).ok());
}

}  // namespace
}  // namespace fairdl

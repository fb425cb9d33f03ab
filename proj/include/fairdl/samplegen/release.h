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

#ifndef FAIRDL_SAMPLEGEN_RELEASE_H_
#define FAIRDL_SAMPLEGEN_RELEASE_H_

#include <cstddef>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/common/types.h"
#include "fairdl/numerics/dataset.h"
#include "fairdl/numerics/matrix.h"
#include "fairdl/privacy/accountant.h"

namespace fairdl {

// Artificial samples published by one party. Deliberately has no label
// field.
class SampleRelease {
 public:
  SampleRelease(PartyId releaser, Matrix samples)
      : releaser_(releaser), samples_(std::move(samples)) {}

  PartyId releaser() const { return releaser_; }
  const Matrix& samples() const { return samples_; }
  size_t count() const { return samples_.rows(); }

  bool operator==(const SampleRelease&) const = default;

 private:
  PartyId releaser_;
  Matrix samples_;
};

// u = floor(lambda * dataset_size).
size_t ReleaseCount(double sharing_level, size_t dataset_size);

class SampleGenerator {
 public:
  virtual ~SampleGenerator() = default;

  // Publishes ReleaseCount(sharing_level, data.size()) samples and debits one
  // release from `accountant`.
  virtual absl::StatusOr<SampleRelease> Generate(PartyId releaser,
                                                 const Dataset& data,
                                                 double sharing_level,
                                                 PrivacyAccountant& accountant,
                                                 Rng& rng) const = 0;
};

struct PrototypeOptions {
  double epsilon = 1.0;
  double delta = 1e-6;
  // Std of the per-sample Gaussian jitter around a noisy prototype.
  double jitter = 0.02;
  // Each original record is counted this many times when bounding the
  // class-mean sensitivity, matching a dataset augmented by replication.
  size_t multiplicity = 1;
  // Scales the calibrated prototype noise; tests set 0.
  double noise_scale = 1.0;
};

// Gaussian mechanism on per-class feature means (features clamped to [0,1],
// L2 sensitivity sqrt(dim) / class_count), then noisy prototype plus jitter
// with classes drawn in local proportions. Output is clamped to [0,1].
class NoisyPrototypeGenerator : public SampleGenerator {
 public:
  explicit NoisyPrototypeGenerator(PrototypeOptions options)
      : options_(options) {}

  absl::StatusOr<SampleRelease> Generate(PartyId releaser, const Dataset& data,
                                         double sharing_level,
                                         PrivacyAccountant& accountant,
                                         Rng& rng) const override;

  // The privatised class means, exposed for tests.
  absl::StatusOr<Matrix> NoisyPrototypes(const Dataset& data, Rng& rng) const;

  const PrototypeOptions& options() const { return options_; }

 private:
  PrototypeOptions options_;
};

}  // namespace fairdl

#endif  // FAIRDL_SAMPLEGEN_RELEASE_H_

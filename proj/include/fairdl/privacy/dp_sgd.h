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

#ifndef FAIRDL_PRIVACY_DP_SGD_H_
#define FAIRDL_PRIVACY_DP_SGD_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/numerics/dataset.h"
#include "fairdl/numerics/mlp.h"
#include "fairdl/privacy/accountant.h"

namespace fairdl {

struct PrivacyParams {
  double epsilon_per_step = 1.0;
  double delta_per_step = 1e-6;
  double clip_norm = 1.0;
  size_t lot_size = 1;
  size_t dataset_size = 1;
  // Multiplies the calibrated noise. Only tests set this to anything but 1;
  // zero yields the clipped lot mean.
  double noise_scale = 1.0;

  absl::Status Validate() const;
  double sample_ratio() const {
    return static_cast<double>(lot_size) / static_cast<double>(dataset_size);
  }
  StepRecord step_record() const {
    return {epsilon_per_step, delta_per_step, sample_ratio()};
  }
};

// g <- g / max(1, |g| / clip_norm) for each gradient.
std::vector<DenseGradient> ClipPerExample(std::vector<DenseGradient> gradients,
                                          double clip_norm);

// Draws a lot of L examples with replacement, averages clipped per-example
// gradients and adds N(0, (sigma*C/L)^2) per coordinate. The step is debited
// from `accountant` before any data is touched.
absl::StatusOr<DenseGradient> DpSgdStep(const MlpModel& model,
                                        const Dataset& data,
                                        const PrivacyParams& params,
                                        PrivacyAccountant& accountant,
                                        Rng& rng);

struct DpTrainResult {
  size_t steps = 0;
  bool budget_exhausted = false;
};

// Repeats DP-SGD steps until `max_steps` is reached or the accountant
// refuses.
absl::StatusOr<DpTrainResult> DpTrain(MlpModel& model, const Dataset& data,
                                      const PrivacyParams& params,
                                      const InverseTimeDecay& schedule,
                                      size_t max_steps, uint64_t& global_step,
                                      PrivacyAccountant& accountant, Rng& rng);

}  // namespace fairdl

#endif  // FAIRDL_PRIVACY_DP_SGD_H_

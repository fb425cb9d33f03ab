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

#include "fairdl/privacy/dp_sgd.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"

namespace fairdl {

absl::Status PrivacyParams::Validate() const {
  if (!(clip_norm > 0)) return absl::InvalidArgumentError("clip_norm must be > 0");
  if (lot_size == 0 || lot_size > dataset_size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "lot size %d must be in [1, N=%d]", lot_size, dataset_size));
  }
  if (!(noise_scale >= 0)) {
    return absl::InvalidArgumentError("noise_scale must be >= 0");
  }
  return CalibrateSigma(epsilon_per_step, delta_per_step).status();
}

std::vector<DenseGradient> ClipPerExample(std::vector<DenseGradient> gradients,
                                          double clip_norm) {
  for (DenseGradient& g : gradients) {
    const double factor = std::max(1.0, g.Norm() / clip_norm);
    if (factor > 1.0) {
      for (double& v : g.values) v /= factor;
    }
  }
  return gradients;
}

absl::StatusOr<DenseGradient> DpSgdStep(const MlpModel& model,
                                        const Dataset& data,
                                        const PrivacyParams& params,
                                        PrivacyAccountant& accountant,
                                        Rng& rng) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (data.size() != params.dataset_size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dataset has %d examples, params expect %d", data.size(),
        params.dataset_size));
  }
  if (accountant.exhausted()) {
    return absl::ResourceExhaustedError("privacy budget already exhausted");
  }
  if (absl::Status s = accountant.Record(params.step_record()); !s.ok()) {
    return s;
  }
  const double sigma =
      *CalibrateSigma(params.epsilon_per_step, params.delta_per_step);

  std::vector<size_t> lot(params.lot_size);
  for (size_t& idx : lot) idx = rng.UniformIndex(data.size());
  absl::StatusOr<std::vector<DenseGradient>> per_example =
      PerExampleGradients(model, data.Subset(lot));
  if (!per_example.ok()) return per_example.status();
  std::vector<DenseGradient> clipped =
      ClipPerExample(*std::move(per_example), params.clip_norm);

  const double lot_size = static_cast<double>(params.lot_size);
  DenseGradient out{std::vector<double>(model.parameter_count(), 0.0)};
  for (const DenseGradient& g : clipped) {
    for (size_t i = 0; i < g.size(); ++i) out.values[i] += g.values[i];
  }
  const double noise_std =
      params.noise_scale * sigma * params.clip_norm / lot_size;
  for (double& v : out.values) {
    v /= lot_size;
    if (noise_std > 0) v += rng.Normal(0.0, noise_std);
  }
  return out;
}

absl::StatusOr<DpTrainResult> DpTrain(MlpModel& model, const Dataset& data,
                                      const PrivacyParams& params,
                                      const InverseTimeDecay& schedule,
                                      size_t max_steps, uint64_t& global_step,
                                      PrivacyAccountant& accountant, Rng& rng) {
  DpTrainResult result;
  while (result.steps < max_steps) {
    absl::StatusOr<DenseGradient> g =
        DpSgdStep(model, data, params, accountant, rng);
    if (absl::IsResourceExhausted(g.status())) {
      result.budget_exhausted = true;
      break;
    }
    if (!g.ok()) return g.status();
    if (absl::Status s = SgdStep(model, *g, schedule.At(global_step)); !s.ok()) {
      return s;
    }
    ++global_step;
    ++result.steps;
  }
  return result;
}

}  // namespace fairdl

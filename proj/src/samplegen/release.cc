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

#include "fairdl/samplegen/release.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace fairdl {

size_t ReleaseCount(double sharing_level, size_t dataset_size) {
  return static_cast<size_t>(
      FloorCount(sharing_level * static_cast<double>(dataset_size)));
}

absl::StatusOr<Matrix> NoisyPrototypeGenerator::NoisyPrototypes(
    const Dataset& data, Rng& rng) const {
  absl::StatusOr<double> sigma = CalibrateSigma(options_.epsilon, options_.delta);
  if (!sigma.ok()) return sigma.status();
  const size_t dim = data.dim();
  const size_t classes = static_cast<size_t>(data.num_classes);
  Matrix means(classes, dim, 0.0);
  std::vector<size_t> counts = data.ClassCounts();
  for (size_t i = 0; i < data.size(); ++i) {
    std::span<double> m = means.row(static_cast<size_t>(data.labels[i]));
    std::span<const double> x = data.features.row(i);
    for (size_t k = 0; k < dim; ++k) m[k] += std::clamp(x[k], 0.0, 1.0);
  }
  const double root_dim = std::sqrt(static_cast<double>(dim));
  for (size_t c = 0; c < classes; ++c) {
    if (counts[c] == 0) continue;
    const double n = static_cast<double>(counts[c]);
    const double std = options_.noise_scale * *sigma * root_dim /
                       (n * static_cast<double>(options_.multiplicity));
    for (double& v : means.row(c)) {
      v /= n;
      if (std > 0) v += rng.Normal(0.0, std);
    }
  }
  return means;
}

absl::StatusOr<SampleRelease> NoisyPrototypeGenerator::Generate(
    PartyId releaser, const Dataset& data, double sharing_level,
    PrivacyAccountant& accountant, Rng& rng) const {
  if (!(sharing_level > 0) || sharing_level > 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sharing level must be in (0, 1], got %g", sharing_level));
  }
  if (data.empty()) return absl::InvalidArgumentError("no local data");
  if (options_.multiplicity < 1) {
    return absl::InvalidArgumentError("multiplicity must be >= 1");
  }
  if (absl::Status s = CalibrateSigma(options_.epsilon, options_.delta).status();
      !s.ok()) {
    return s;
  }
  if (absl::Status s = accountant.Record({options_.epsilon, options_.delta, 1.0});
      !s.ok()) {
    return s;
  }
  absl::StatusOr<Matrix> prototypes = NoisyPrototypes(data, rng);
  if (!prototypes.ok()) return prototypes.status();

  const std::vector<size_t> counts = data.ClassCounts();
  std::discrete_distribution<size_t> pick(counts.begin(), counts.end());
  const size_t u = ReleaseCount(sharing_level, data.size());
  Matrix samples(u, data.dim());
  for (size_t r = 0; r < u; ++r) {
    const size_t c = pick(rng.engine());
    std::span<const double> proto = prototypes->row(c);
    std::span<double> out = samples.row(r);
    for (size_t k = 0; k < out.size(); ++k) {
      out[k] = std::clamp(proto[k] + rng.Normal(0.0, options_.jitter), 0.0, 1.0);
    }
  }
  return SampleRelease(releaser, std::move(samples));
}

}  // namespace fairdl

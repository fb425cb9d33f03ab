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

#include "fairdl/harness/setting.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_format.h"
#include "fairdl/adversary/adversary.h"

namespace fairdl {

namespace {

constexpr uint64_t kStreamSetting = 0x5e77;
constexpr uint64_t kStreamTask = 0x7a5c;
constexpr uint64_t kStreamTest = 0x7e57;
constexpr uint64_t kStreamPool = 0x9001;

absl::StatusOr<Dataset> LoadSource(const DatasetConfig& d) {
  if (d.source == "csv") return LoadCsv(d.csv_path, d.num_classes);
  if (d.source == "idx") return LoadIdx(d.idx_images, d.idx_labels, d.num_classes);
  return absl::InvalidArgumentError("not a file source");
}

Dataset Range(const Dataset& data, size_t begin, size_t count) {
  std::vector<size_t> idx(count);
  std::iota(idx.begin(), idx.end(), begin);
  return data.Subset(idx);
}

}  // namespace

std::vector<size_t> ApportionCounts(size_t total, const std::vector<double>& weights) {
  std::vector<size_t> out(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || !(sum > 0)) return out;
  std::vector<double> remainder(weights.size());
  size_t assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double share = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<size_t>(std::floor(share));
    remainder[i] = share - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return remainder[a] > remainder[b]; });
  for (size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned) {
    ++out[order[k]];
  }
  return out;
}

absl::StatusOr<SettingSpec> BuildSettingSpec(const PartitionConfig& partition,
                                             Rng& rng) {
  const size_t n = partition.parties;
  if (n < 2) return absl::InvalidArgumentError("need at least two parties");
  SettingSpec spec;
  spec.setting = partition.setting;
  spec.parties = n;
  spec.sizes.assign(n, partition.examples_per_party);
  spec.sharing_levels.assign(n, partition.lambda);
  switch (partition.setting) {
    case 1:
      break;
    case 2:
      for (double& l : spec.sharing_levels) {
        l = rng.Uniform(partition.lambda_low, partition.lambda_high);
      }
      break;
    case 3: {
      if (partition.min_party_size > partition.examples_per_party) {
        return absl::InvalidArgumentError("min_party_size exceeds examples_per_party");
      }
      std::vector<double> weights(n);
      for (double& w : weights) w = rng.Gamma(partition.dirichlet_alpha);
      const size_t rest = n * (partition.examples_per_party - partition.min_party_size);
      std::vector<size_t> extra = ApportionCounts(rest, weights);
      for (size_t i = 0; i < n; ++i) spec.sizes[i] = partition.min_party_size + extra[i];
      break;
    }
    default:
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown setting %d", partition.setting));
  }
  return spec;
}

absl::StatusOr<CellData> BuildCell(const ExperimentConfig& config, uint64_t seed) {
  if (std::vector<std::string> errors = config.Validate(); !errors.empty()) {
    return absl::InvalidArgumentError(errors.front());
  }
  CellData cell;
  Rng setting_rng = Rng::Derive(seed, {kStreamSetting});
  absl::StatusOr<SettingSpec> spec = BuildSettingSpec(config.partition, setting_rng);
  if (!spec.ok()) return spec.status();
  cell.spec = *std::move(spec);
  const size_t n = cell.spec.parties;
  const size_t total =
      std::accumulate(cell.spec.sizes.begin(), cell.spec.sizes.end(), size_t{0});

  const AdversaryConfig* gan = nullptr;
  for (const AdversaryConfig& a : config.adversaries) {
    if (a.kind == AdversaryKind::kGanAttacker && a.non_iid) gan = &a;
  }
  // Class-restricted draws need a larger pool to choose from.
  const size_t pool_size = gan ? total * static_cast<size_t>(config.dataset.blobs.num_classes)
                               : total;

  Dataset pool;
  Rng pool_rng = Rng::Derive(seed, {kStreamPool});
  if (config.dataset.source == "blobs") {
    BlobTask task = BlobTask::Create(config.dataset.blobs, MixSeed(seed, kStreamTask));
    Rng test_rng = Rng::Derive(seed, {kStreamTest});
    cell.test = task.Sample(config.dataset.test_size, test_rng);
    pool = task.Sample(pool_size, pool_rng);
  } else {
    absl::StatusOr<Dataset> all = LoadSource(config.dataset);
    if (!all.ok()) return all.status();
    if (all->size() < config.dataset.test_size + total) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dataset has %d examples, the setting needs %d", all->size(),
          config.dataset.test_size + total));
    }
    Dataset shuffled = Shuffled(*all, pool_rng);
    cell.test = Range(shuffled, 0, config.dataset.test_size);
    pool = Range(shuffled, config.dataset.test_size,
                 shuffled.size() - config.dataset.test_size);
  }

  std::vector<Dataset> data(n);
  if (gan) {
    absl::StatusOr<GanPartition> split = GanAttackerSetup(
        pool, gan->adversary_classes, n - 1, config.partition.examples_per_party,
        pool_rng);
    if (!split.ok()) return split.status();
    size_t v = 0;
    for (size_t i = 0; i < n; ++i) {
      data[i] = i == gan->party ? split->adversary : split->victims[v++];
    }
  } else {
    size_t offset = 0;
    for (size_t i = 0; i < n; ++i) {
      data[i] = Range(pool, offset, cell.spec.sizes[i]);
      offset += cell.spec.sizes[i];
    }
  }

  for (size_t i = 0; i < n; ++i) {
    PartyInput in;
    in.data = std::move(data[i]);
    in.sharing_level = cell.spec.sharing_levels[i];
    if (!config.protocol.latency.empty()) in.latency = config.protocol.latency[i];
    for (const AdversaryConfig& a : config.adversaries) {
      if (a.party == i) in.adversary = a;
    }
    cell.parties.push_back(std::move(in));
  }
  return cell;
}

}  // namespace fairdl

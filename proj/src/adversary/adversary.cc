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

#include "fairdl/adversary/adversary.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_format.h"

namespace fairdl {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kExcluded:
      return "excluded";
    case EventKind::kTokensExhausted:
      return "tokens_exhausted";
    case EventKind::kPrivacyExhausted:
      return "privacy_exhausted";
    case EventKind::kJoined:
      return "joined";
    case EventKind::kDeparted:
      return "departed";
  }
  return "unknown";
}

namespace {
constexpr std::string_view kKindNames[] = {
    "free_rider_random_label", "free_rider_random_grad",
    "free_rider_crafted_grad", "gan_attacker"};
}  // namespace

std::string_view AdversaryKindName(AdversaryKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

absl::StatusOr<AdversaryKind> ParseAdversaryKind(std::string_view name) {
  for (int k = 0; k < 4; ++k) {
    if (kKindNames[k] == name) return static_cast<AdversaryKind>(k);
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown adversary kind '%s'", std::string(name)));
}

std::vector<int> FreeriderLabels(const SampleRelease& release, int num_classes,
                                 Rng& rng) {
  std::vector<int> labels(release.count());
  for (int& l : labels) {
    l = num_classes <= 1
            ? 0
            : static_cast<int>(rng.UniformIndex(static_cast<size_t>(num_classes)));
  }
  return labels;
}

DenseGradient FreeriderGradients(AdversaryKind kind, size_t param_count,
                                 double scale, const DenseGradient* echo_source,
                                 Rng& rng) {
  DenseGradient g{std::vector<double>(param_count, 0.0)};
  if (kind == AdversaryKind::kFreeRiderCraftedGrad && echo_source != nullptr &&
      echo_source->size() == param_count) {
    g = *echo_source;
  }
  if (scale > 0) {
    for (double& v : g.values) v += rng.Normal(0.0, scale);
  }
  return g;
}

absl::StatusOr<GanPartition> GanAttackerSetup(const Dataset& pool,
                                              std::span<const int> adversary_classes,
                                              size_t victims, size_t per_party,
                                              Rng& rng) {
  if (victims == 0) return absl::InvalidArgumentError("no victims");
  std::set<int> own(adversary_classes.begin(), adversary_classes.end());
  if (own.empty()) return absl::InvalidArgumentError("adversary owns no class");
  std::vector<int> victim_classes;
  for (int c = 0; c < pool.num_classes; ++c) {
    if (!own.count(c)) victim_classes.push_back(c);
  }
  for (int c : own) {
    if (c < 0 || c >= pool.num_classes) {
      return absl::InvalidArgumentError(absl::StrFormat("class %d out of range", c));
    }
  }
  if (victim_classes.empty()) {
    return absl::InvalidArgumentError("victims would own no class");
  }
  std::vector<int> own_list(own.begin(), own.end());
  Dataset adv_pool = Shuffled(pool.FilterClasses(own_list), rng);
  Dataset vic_pool = Shuffled(pool.FilterClasses(victim_classes), rng);
  if (adv_pool.size() < per_party || vic_pool.size() < victims * per_party) {
    return absl::InvalidArgumentError("pool too small for the requested split");
  }
  GanPartition out;
  std::vector<size_t> idx(per_party);
  for (size_t k = 0; k < per_party; ++k) idx[k] = k;
  out.adversary = adv_pool.Subset(idx);
  for (size_t v = 0; v < victims; ++v) {
    for (size_t k = 0; k < per_party; ++k) idx[k] = v * per_party + k;
    out.victims.push_back(vic_pool.Subset(idx));
  }
  return out;
}

std::string_view DetectionStageName(DetectionStage stage) {
  switch (stage) {
    case DetectionStage::kInit:
      return "init";
    case DetectionStage::kUpdate:
      return "update";
    case DetectionStage::kNever:
      return "never";
  }
  return "unknown";
}

std::vector<Detection> DetectionReport(std::span<const AdversaryConfig> adversaries,
                                       std::span<const RunEvent> events) {
  std::vector<Detection> out;
  for (const AdversaryConfig& a : adversaries) {
    Detection d{a.party, a.kind};
    for (const RunEvent& e : events) {
      if (e.party != a.party) continue;
      if (e.kind != EventKind::kExcluded && e.kind != EventKind::kTokensExhausted) {
        continue;
      }
      d.detected = true;
      d.round = e.round;
      d.stage = (e.kind == EventKind::kExcluded && e.round == 0)
                    ? DetectionStage::kInit
                    : DetectionStage::kUpdate;
      break;
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace fairdl

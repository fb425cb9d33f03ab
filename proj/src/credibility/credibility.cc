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

#include "fairdl/credibility/credibility.h"

#include <cmath>

#include "absl/strings/str_format.h"

namespace fairdl {

double DefaultThreshold(size_t party_count) {
  return (1.0 / static_cast<double>(party_count)) * (2.0 / 3.0);
}

double CredibilityList::Get(PartyId peer) const {
  auto it = values_.find(peer);
  return it == values_.end() ? 0.0 : it->second;
}

double CredibilityList::Sum() const {
  double s = 0;
  for (const auto& [peer, v] : values_) s += v;
  return s;
}

ScreenResult NormalizeAndScreen(PartyId owner,
                                const std::map<PartyId, double>& raw,
                                double threshold) {
  ScreenResult out{CredibilityList(owner, threshold), {}};
  double sum = 0;
  for (const auto& [peer, v] : raw) sum += v;
  if (!(sum > 0)) {
    for (const auto& [peer, v] : raw) out.reports.push_back(peer);
    return out;
  }
  for (const auto& [peer, v] : raw) {
    const double c = v / sum;
    out.list.Set(peer, c);
    if (c < threshold) out.reports.push_back(peer);
  }
  return out;
}

absl::StatusOr<CredibleSet> ConsensusExclude(
    const std::map<PartyId, std::set<PartyId>>& reports, CredibleSet credible) {
  while (true) {
    std::map<PartyId, size_t> votes;
    for (const auto& [reporter, targets] : reports) {
      if (!credible.count(reporter)) continue;
      for (PartyId t : targets) {
        if (t != reporter && credible.count(t)) ++votes[t];
      }
    }
    std::vector<PartyId> removed;
    for (const auto& [target, count] : votes) {
      if (2 * count > credible.size()) removed.push_back(target);
    }
    if (removed.empty()) return credible;
    if (removed.size() == credible.size()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "consensus would exclude all %d remaining parties", credible.size()));
    }
    for (PartyId p : removed) credible.erase(p);
  }
}

double CredibilitySigmoid(double x) {
  return 1.0 / (1.0 + std::exp(-15.0 * (x - 0.5)));
}

double AccuracyFactor(double acc, double acc_without_peer) {
  const double denom = acc + acc_without_peer;
  if (!(denom > 0)) return 0.5;
  return acc / denom;
}

double UpdateCredibility(double c_prev, double acc, double acc_without_peer) {
  return (c_prev + CredibilitySigmoid(AccuracyFactor(acc, acc_without_peer))) / 2;
}

}  // namespace fairdl

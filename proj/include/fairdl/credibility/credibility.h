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

#ifndef FAIRDL_CREDIBILITY_CREDIBILITY_H_
#define FAIRDL_CREDIBILITY_CREDIBILITY_H_

#include <map>
#include <set>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/types.h"

namespace fairdl {

using CredibleSet = std::set<PartyId>;

// c_th = (1/n) * (2/3).
double DefaultThreshold(size_t party_count);

// A party's private view of its peers. Values over the listed peers sum to 1
// after normalisation; banned peers are simply absent.
class CredibilityList {
 public:
  CredibilityList() = default;
  CredibilityList(PartyId owner, double threshold)
      : owner_(owner), threshold_(threshold) {}

  PartyId owner() const { return owner_; }
  double threshold() const { return threshold_; }
  const std::map<PartyId, double>& values() const { return values_; }

  bool Contains(PartyId peer) const { return values_.count(peer) > 0; }
  // Zero for peers not in the list.
  double Get(PartyId peer) const;
  void Set(PartyId peer, double value) { values_[peer] = value; }
  void Remove(PartyId peer) { values_.erase(peer); }
  double Sum() const;

  bool operator==(const CredibilityList&) const = default;

 private:
  PartyId owner_ = 0;
  double threshold_ = 0;
  std::map<PartyId, double> values_;
};

struct ScreenResult {
  CredibilityList list;
  // Peers whose normalised credibility fell below the threshold.
  std::vector<PartyId> reports;
};

// Divides `raw` by its sum and reports every peer below `threshold`. An
// all-zero map reports every peer and leaves the list empty.
ScreenResult NormalizeAndScreen(PartyId owner,
                                const std::map<PartyId, double>& raw,
                                double threshold);

// Removes every member reported by strictly more than half of the current
// credible set, counting only reporters that are themselves credible, and
// repeats until nothing changes. Fails if the set would become empty.
absl::StatusOr<CredibleSet> ConsensusExclude(
    const std::map<PartyId, std::set<PartyId>>& reports, CredibleSet credible);

// f(x) = 1 / (1 + exp(-15 (x - 0.5))).
double CredibilitySigmoid(double x);
// x = acc / (acc + acc_without_peer); 0.5 when both are zero.
double AccuracyFactor(double acc, double acc_without_peer);
// (c_prev + f(x)) / 2.
double UpdateCredibility(double c_prev, double acc, double acc_without_peer);

}  // namespace fairdl

#endif  // FAIRDL_CREDIBILITY_CREDIBILITY_H_

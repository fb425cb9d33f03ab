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

#ifndef FAIRDL_CREDIBILITY_ALLOCATION_H_
#define FAIRDL_CREDIBILITY_ALLOCATION_H_

#include <cstdint>
#include <map>

#include "fairdl/common/types.h"

namespace fairdl {

// floor(min(credibility * budget, sharing_level * gradient_length)).
int64_t DownloadAllocation(double credibility, int64_t budget,
                           double sharing_level, size_t gradient_length);

// Downloads happen only while the budget stays below the token balance.
inline bool DownloadGuard(int64_t budget, int64_t balance) {
  return budget < balance;
}

struct SupplementRequest {
  // Download budget d_i.
  int64_t budget = 0;
  // Base allocations d_j^i.
  std::map<PartyId, int64_t> allocated;
  // Per-seller caps lambda_j * |dw_j|.
  std::map<PartyId, int64_t> capacity;
  std::map<PartyId, double> credibility;
  // Tokens still spendable after the base allocations.
  int64_t token_limit = 0;
};

// Splits the gap e = budget - sum(allocated) across sellers with spare
// capacity r_j = capacity_j - allocated_j and positive credibility. The
// continuous split is credibility-proportional water-filling capped at r_j;
// integer amounts take the floors plus one unit each for the largest
// fractional parts (ties to the lower id). The total is
// min(e, sum r_j, token_limit).
std::map<PartyId, int64_t> Supplement(const SupplementRequest& request);

}  // namespace fairdl

#endif  // FAIRDL_CREDIBILITY_ALLOCATION_H_

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

#include "fairdl/credibility/allocation.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fairdl {

int64_t DownloadAllocation(double credibility, int64_t budget,
                           double sharing_level, size_t gradient_length) {
  return FloorCount(std::min(credibility * static_cast<double>(budget),
                             sharing_level * static_cast<double>(gradient_length)));
}

std::map<PartyId, int64_t> Supplement(const SupplementRequest& request) {
  std::map<PartyId, int64_t> out;
  int64_t taken = 0;
  for (const auto& [peer, d] : request.allocated) taken += d;
  const int64_t gap = request.budget - taken;
  if (gap <= 0 || request.token_limit <= 0) return out;

  struct Supplier {
    PartyId id;
    double weight;
    int64_t spare;
    double target = 0;
    bool saturated = false;
  };
  std::vector<Supplier> suppliers;
  int64_t spare_total = 0;
  for (const auto& [peer, cap] : request.capacity) {
    auto alloc_it = request.allocated.find(peer);
    const int64_t spare =
        cap - (alloc_it == request.allocated.end() ? 0 : alloc_it->second);
    auto cred_it = request.credibility.find(peer);
    const double weight =
        cred_it == request.credibility.end() ? 0.0 : cred_it->second;
    if (spare > 0 && weight > 0) {
      suppliers.push_back({peer, weight, spare});
      spare_total += spare;
    }
  }
  const int64_t total = std::min({gap, spare_total, request.token_limit});
  if (total <= 0) return out;

  // Water-filling: saturate suppliers whose proportional share exceeds their
  // spare capacity, then split the rest proportionally.
  double remaining = static_cast<double>(total);
  while (true) {
    double weight_sum = 0;
    for (const Supplier& s : suppliers) {
      if (!s.saturated) weight_sum += s.weight;
    }
    if (!(weight_sum > 0)) break;
    const double level = remaining / weight_sum;
    bool changed = false;
    for (Supplier& s : suppliers) {
      if (!s.saturated && level * s.weight >= static_cast<double>(s.spare)) {
        s.saturated = true;
        s.target = static_cast<double>(s.spare);
        remaining -= s.target;
        changed = true;
      }
    }
    if (!changed) {
      for (Supplier& s : suppliers) {
        if (!s.saturated) s.target = level * s.weight;
      }
      break;
    }
    if (remaining <= 0) break;
  }

  // Largest-remainder rounding.
  std::vector<int64_t> amount(suppliers.size());
  int64_t assigned = 0;
  for (size_t k = 0; k < suppliers.size(); ++k) {
    amount[k] = std::min<int64_t>(suppliers[k].spare,
                                  FloorCount(suppliers[k].target));
    assigned += amount[k];
  }
  std::vector<size_t> order(suppliers.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  auto frac = [&](size_t k) {
    return suppliers[k].target - static_cast<double>(amount[k]);
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double fa = frac(a), fb = frac(b);
    if (std::fabs(fa - fb) > 1e-9) return fa > fb;
    return suppliers[a].id < suppliers[b].id;
  });
  for (size_t pass = 0; assigned < total && pass < 2; ++pass) {
    for (size_t k : order) {
      if (assigned >= total) break;
      if (amount[k] < suppliers[k].spare) {
        ++amount[k];
        ++assigned;
      }
    }
  }
  for (size_t k = 0; k < suppliers.size(); ++k) {
    if (amount[k] > 0) out[suppliers[k].id] = amount[k];
  }
  return out;
}

}  // namespace fairdl

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

#include "fairdl/credibility/tokens.h"

#include "absl/strings/str_format.h"

namespace fairdl {

absl::StatusOr<int64_t> InitTokens(double sharing_level, size_t param_count,
                                   size_t party_count) {
  if (party_count < 2) {
    return absl::InvalidArgumentError("token initialisation needs n >= 2");
  }
  if (sharing_level < 0 || sharing_level > 1) {
    return absl::InvalidArgumentError("sharing level must be in [0, 1]");
  }
  return FloorCount(sharing_level * static_cast<double>(param_count) *
                    static_cast<double>(party_count - 1));
}

absl::Status SettleTokens(TokenAccount& buyer, TokenAccount& seller,
                          int64_t amount) {
  if (amount < 0) return absl::InvalidArgumentError("negative token transfer");
  if (buyer.party == seller.party) {
    return absl::InvalidArgumentError("buyer and seller must differ");
  }
  if (amount > buyer.balance) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "party %d holds %d tokens, cannot pay %d", buyer.party, buyer.balance,
        amount));
  }
  buyer.balance -= amount;
  seller.balance += amount;
  return absl::OkStatus();
}

}  // namespace fairdl

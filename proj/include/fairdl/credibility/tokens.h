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

#ifndef FAIRDL_CREDIBILITY_TOKENS_H_
#define FAIRDL_CREDIBILITY_TOKENS_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/common/types.h"

namespace fairdl {

// floor(lambda * param_count * (n - 1)).
absl::StatusOr<int64_t> InitTokens(double sharing_level, size_t param_count,
                                   size_t party_count);

struct TokenAccount {
  PartyId party = 0;
  int64_t balance = 0;
  bool operator==(const TokenAccount&) const = default;
};

// Moves `amount` tokens from buyer to seller. Refused, with both accounts
// untouched, when the buyer cannot pay.
absl::Status SettleTokens(TokenAccount& buyer, TokenAccount& seller,
                          int64_t amount);

}  // namespace fairdl

#endif  // FAIRDL_CREDIBILITY_TOKENS_H_

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

#ifndef FAIRDL_COMMON_EVENTS_H_
#define FAIRDL_COMMON_EVENTS_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "fairdl/common/types.h"

namespace fairdl {

enum class EventKind {
  // Removed by consensus. Round 0 is the initialisation stage.
  kExcluded,
  // Download budget hit zero: the party can no longer buy.
  kTokensExhausted,
  // Update-stage privacy budget used up: the party stops publishing.
  kPrivacyExhausted,
  kJoined,
  kDeparted,
};

std::string_view EventKindName(EventKind kind);

struct RunEvent {
  EventKind kind = EventKind::kExcluded;
  PartyId party = 0;
  int round = 0;
  bool operator==(const RunEvent&) const = default;
};

}  // namespace fairdl

#endif  // FAIRDL_COMMON_EVENTS_H_

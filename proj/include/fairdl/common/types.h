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

#ifndef FAIRDL_COMMON_TYPES_H_
#define FAIRDL_COMMON_TYPES_H_

#include <cmath>
#include <cstdint>

namespace fairdl {

using PartyId = uint32_t;

// Converts a nonnegative real count to an integer count, rounding down.
// Products such as 0.29 * 100 land a hair below the integer they denote, so
// values within 1e-9 of the next integer are snapped up first.
inline int64_t FloorCount(double value) {
  if (!(value > 0.0)) return 0;
  return static_cast<int64_t>(std::floor(value + 1e-9));
}

}  // namespace fairdl

#endif  // FAIRDL_COMMON_TYPES_H_

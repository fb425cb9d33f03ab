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

#ifndef FAIRDL_NUMERICS_SPARSE_UPDATE_H_
#define FAIRDL_NUMERICS_SPARSE_UPDATE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/numerics/mlp.h"

namespace fairdl {

struct SparseEntry {
  uint32_t index = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

// Selected gradient coordinates sent from one party to another. Indices are
// unique, strictly increasing and below the origin model's parameter count.
class SparseUpdate {
 public:
  SparseUpdate() = default;
  static absl::StatusOr<SparseUpdate> Create(std::vector<SparseEntry> entries,
                                             size_t parameter_count);

  const std::vector<SparseEntry>& entries() const { return entries_; }
  size_t parameter_count() const { return parameter_count_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  SparseUpdate Negated() const;

  bool operator==(const SparseUpdate&) const = default;

 private:
  std::vector<SparseEntry> entries_;
  size_t parameter_count_ = 0;
};

// The k coordinates of largest absolute value; equal magnitudes prefer the
// lower index. Entries come back sorted by index.
absl::StatusOr<SparseUpdate> SelectLargest(const DenseGradient& gradient,
                                           size_t k);

// Adds every (index, value) into the model's flat parameters. Overlapping
// indices accumulate. The per-index sum is formed over values sorted by
// (index, value) before it touches the parameter, so any permutation of
// `updates` gives bitwise-identical parameters.
absl::Status ApplyUpdates(MlpModel& model, std::span<const SparseUpdate> updates);

// Binary encoding used inside encrypted payloads: u64 parameter count, u64
// entry count, then (u32 index, f64 bits) per entry, all little-endian.
std::vector<uint8_t> EncodeSparseUpdate(const SparseUpdate& update);
absl::StatusOr<SparseUpdate> DecodeSparseUpdate(std::span<const uint8_t> bytes);

}  // namespace fairdl

#endif  // FAIRDL_NUMERICS_SPARSE_UPDATE_H_

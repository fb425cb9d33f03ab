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

#include "fairdl/numerics/sparse_update.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace fairdl {

absl::StatusOr<SparseUpdate> SparseUpdate::Create(
    std::vector<SparseEntry> entries, size_t parameter_count) {
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= parameter_count) {
      return absl::OutOfRangeError(absl::StrFormat(
          "index %d out of range for %d parameters", entries[i].index,
          parameter_count));
    }
    if (i > 0 && entries[i].index <= entries[i - 1].index) {
      return absl::InvalidArgumentError(
          "sparse indices must be unique and strictly increasing");
    }
    if (!std::isfinite(entries[i].value)) {
      return absl::InvalidArgumentError("sparse value is not finite");
    }
  }
  SparseUpdate u;
  u.entries_ = std::move(entries);
  u.parameter_count_ = parameter_count;
  return u;
}

SparseUpdate SparseUpdate::Negated() const {
  SparseUpdate out = *this;
  for (SparseEntry& e : out.entries_) e.value = -e.value;
  return out;
}

absl::StatusOr<SparseUpdate> SelectLargest(const DenseGradient& gradient,
                                           size_t k) {
  const size_t n = gradient.size();
  if (k > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("cannot select %d of %d gradients", k, n));
  }
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto larger = [&](uint32_t a, uint32_t b) {
    const double ma = std::fabs(gradient.values[a]);
    const double mb = std::fabs(gradient.values[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<ptrdiff_t>(k),
                    order.end(), larger);
  order.resize(k);
  std::sort(order.begin(), order.end());
  std::vector<SparseEntry> entries;
  entries.reserve(k);
  for (uint32_t idx : order) entries.push_back({idx, gradient.values[idx]});
  return SparseUpdate::Create(std::move(entries), n);
}

absl::Status ApplyUpdates(MlpModel& model,
                          std::span<const SparseUpdate> updates) {
  std::vector<SparseEntry> merged;
  for (const SparseUpdate& u : updates) {
    for (const SparseEntry& e : u.entries()) {
      if (e.index >= model.parameter_count()) {
        return absl::OutOfRangeError(absl::StrFormat(
            "update index %d out of range for %d parameters", e.index,
            model.parameter_count()));
      }
      merged.push_back(e);
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              if (a.index != b.index) return a.index < b.index;
              return a.value < b.value;
            });
  std::span<double> w = model.parameters();
  for (size_t i = 0; i < merged.size();) {
    const uint32_t idx = merged[i].index;
    double delta = 0.0;
    for (; i < merged.size() && merged[i].index == idx; ++i) {
      delta += merged[i].value;
    }
    w[idx] += delta;
  }
  return absl::OkStatus();
}

namespace {

void PutU64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t GetU64(std::span<const uint8_t> in, size_t pos, int width) {
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<uint8_t> EncodeSparseUpdate(const SparseUpdate& update) {
  std::vector<uint8_t> out;
  out.reserve(16 + 12 * update.size());
  PutU64(out, update.parameter_count());
  PutU64(out, update.size());
  for (const SparseEntry& e : update.entries()) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(e.index >> (8 * i)));
    PutU64(out, std::bit_cast<uint64_t>(e.value));
  }
  return out;
}

absl::StatusOr<SparseUpdate> DecodeSparseUpdate(std::span<const uint8_t> bytes) {
  if (bytes.size() < 16) return absl::DataLossError("sparse update truncated");
  const uint64_t param_count = GetU64(bytes, 0, 8);
  const uint64_t count = GetU64(bytes, 8, 8);
  if (bytes.size() != 16 + 12 * count) {
    return absl::DataLossError("sparse update length mismatch");
  }
  std::vector<SparseEntry> entries(count);
  for (uint64_t i = 0; i < count; ++i) {
    const size_t pos = 16 + 12 * i;
    entries[i].index = static_cast<uint32_t>(GetU64(bytes, pos, 4));
    entries[i].value = std::bit_cast<double>(GetU64(bytes, pos + 4, 8));
  }
  return SparseUpdate::Create(std::move(entries), param_count);
}

}  // namespace fairdl

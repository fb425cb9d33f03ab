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

#ifndef FAIRDL_LEDGER_BYTES_H_
#define FAIRDL_LEDGER_BYTES_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace fairdl {

using Bytes = std::vector<uint8_t>;
using Hash = std::array<uint8_t, 32>;

std::string ToHex(std::span<const uint8_t> bytes);
absl::StatusOr<Bytes> FromHex(std::string_view hex);
template <size_t N>
absl::StatusOr<std::array<uint8_t, N>> FixedFromHex(std::string_view hex) {
  absl::StatusOr<Bytes> b = FromHex(hex);
  if (!b.ok()) return b.status();
  if (b->size() != N) {
    return absl::InvalidArgumentError("hex string has the wrong length");
  }
  std::array<uint8_t, N> out;
  std::copy(b->begin(), b->end(), out.begin());
  return out;
}

// Little-endian canonical encoder.
class ByteWriter {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U32(uint32_t v);
  void U64(uint64_t v);
  void I64(int64_t v) { U64(static_cast<uint64_t>(v)); }
  void Fixed(std::span<const uint8_t> bytes);
  // Length-prefixed (u64) byte string.
  void Var(std::span<const uint8_t> bytes);
  void Str(std::string_view s);

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  absl::StatusOr<uint8_t> U8();
  absl::StatusOr<uint32_t> U32();
  absl::StatusOr<uint64_t> U64();
  absl::StatusOr<int64_t> I64();
  absl::Status Fixed(std::span<uint8_t> out);
  absl::StatusOr<Bytes> Var();
  absl::StatusOr<std::string> Str();

  bool done() const { return pos_ == in_.size(); }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  absl::Status Need(size_t n) const;

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace fairdl

#endif  // FAIRDL_LEDGER_BYTES_H_

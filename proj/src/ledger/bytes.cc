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

#include "fairdl/ledger/bytes.h"

#include "absl/strings/escaping.h"
#include "absl/strings/str_format.h"

namespace fairdl {

std::string ToHex(std::span<const uint8_t> bytes) {
  return absl::BytesToHexString(absl::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

absl::StatusOr<Bytes> FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) return absl::InvalidArgumentError("odd hex length");
  for (char c : hex) {
    if (!absl::ascii_isxdigit(static_cast<unsigned char>(c))) {
      return absl::InvalidArgumentError("invalid hex digit");
    }
  }
  const std::string raw =
      absl::HexStringToBytes(absl::string_view(hex.data(), hex.size()));
  return Bytes(raw.begin(), raw.end());
}

void ByteWriter::U32(uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::U64(uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::Fixed(std::span<const uint8_t> bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::Var(std::span<const uint8_t> bytes) {
  U64(bytes.size());
  Fixed(bytes);
}

void ByteWriter::Str(std::string_view s) {
  Var(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()),
                               s.size()));
}

absl::Status ByteReader::Need(size_t n) const {
  if (remaining() < n) {
    return absl::OutOfRangeError(absl::StrFormat(
        "truncated input: need %d bytes, %d left", n, remaining()));
  }
  return absl::OkStatus();
}

absl::StatusOr<uint8_t> ByteReader::U8() {
  if (absl::Status s = Need(1); !s.ok()) return s;
  return in_[pos_++];
}

absl::StatusOr<uint32_t> ByteReader::U32() {
  if (absl::Status s = Need(4); !s.ok()) return s;
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in_[pos_++]) << (8 * i);
  return v;
}

absl::StatusOr<uint64_t> ByteReader::U64() {
  if (absl::Status s = Need(8); !s.ok()) return s;
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in_[pos_++]) << (8 * i);
  return v;
}

absl::StatusOr<int64_t> ByteReader::I64() {
  absl::StatusOr<uint64_t> v = U64();
  if (!v.ok()) return v.status();
  return static_cast<int64_t>(*v);
}

absl::Status ByteReader::Fixed(std::span<uint8_t> out) {
  if (absl::Status s = Need(out.size()); !s.ok()) return s;
  std::copy(in_.begin() + pos_, in_.begin() + pos_ + out.size(), out.begin());
  pos_ += out.size();
  return absl::OkStatus();
}

absl::StatusOr<Bytes> ByteReader::Var() {
  absl::StatusOr<uint64_t> n = U64();
  if (!n.ok()) return n.status();
  if (absl::Status s = Need(*n); !s.ok()) return s;
  Bytes out(in_.begin() + pos_, in_.begin() + pos_ + *n);
  pos_ += *n;
  return out;
}

absl::StatusOr<std::string> ByteReader::Str() {
  absl::StatusOr<Bytes> b = Var();
  if (!b.ok()) return b.status();
  return std::string(b->begin(), b->end());
}

}  // namespace fairdl

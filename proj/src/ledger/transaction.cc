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

#include "fairdl/ledger/transaction.h"

#include "absl/strings/str_format.h"

namespace fairdl {
namespace {

constexpr std::string_view kKindNames[] = {"register", "purchase_order",
                                           "fulfillment", "punishment",
                                           "token_transfer"};

void WriteBody(const Transaction& tx, ByteWriter& w) {
  w.U8(static_cast<uint8_t>(tx.kind));
  w.U64(tx.block);
  w.U32(tx.author);
  w.U32(tx.subject);
  w.U32(tx.counterparty);
  w.I64(tx.amount);
  w.U64(tx.count);
  w.U8(tx.exclusion ? 1 : 0);
  w.Fixed(tx.order_ref);
  w.Fixed(tx.payload_hash);
  w.Fixed(tx.sign_key);
  w.Fixed(tx.box_key);
  w.Str(tx.memo);
}

// Propagates a failed StatusOr from a reader call.
#define FAIRDL_READ(lhs, expr)              \
  do {                                      \
    auto _v = (expr);                       \
    if (!_v.ok()) return _v.status();       \
    lhs = *_v;                              \
  } while (0)

}  // namespace

std::string_view TxKindName(TxKind kind) {
  return kKindNames[static_cast<uint8_t>(kind)];
}

absl::StatusOr<TxKind> ParseTxKind(std::string_view name) {
  for (uint8_t k = 0; k < 5; ++k) {
    if (kKindNames[k] == name) return static_cast<TxKind>(k);
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown transaction kind '%s'", std::string(name)));
}

Bytes Transaction::SigningBytes() const {
  ByteWriter w;
  w.Str("fairdl-tx-v1");
  WriteBody(*this, w);
  return w.Take();
}

Bytes Transaction::Encode() const {
  ByteWriter w;
  WriteBody(*this, w);
  w.Fixed(signature);
  return w.Take();
}

absl::StatusOr<Transaction> Transaction::Decode(ByteReader& r) {
  Transaction tx;
  uint8_t kind = 0;
  FAIRDL_READ(kind, r.U8());
  if (kind > 4) return absl::InvalidArgumentError("bad transaction kind");
  tx.kind = static_cast<TxKind>(kind);
  FAIRDL_READ(tx.block, r.U64());
  FAIRDL_READ(tx.author, r.U32());
  FAIRDL_READ(tx.subject, r.U32());
  FAIRDL_READ(tx.counterparty, r.U32());
  FAIRDL_READ(tx.amount, r.I64());
  FAIRDL_READ(tx.count, r.U64());
  uint8_t flag = 0;
  FAIRDL_READ(flag, r.U8());
  if (flag > 1) return absl::InvalidArgumentError("bad exclusion flag");
  tx.exclusion = flag == 1;
  for (std::span<uint8_t> field :
       {std::span<uint8_t>(tx.order_ref), std::span<uint8_t>(tx.payload_hash),
        std::span<uint8_t>(tx.sign_key), std::span<uint8_t>(tx.box_key)}) {
    if (absl::Status s = r.Fixed(field); !s.ok()) return s;
  }
  FAIRDL_READ(tx.memo, r.Str());
  if (absl::Status s = r.Fixed(tx.signature); !s.ok()) return s;
  return tx;
}

Hash Block::ComputeHash() const {
  ByteWriter w;
  w.Str("fairdl-block-v1");
  w.U64(index);
  w.Fixed(prev_hash);
  w.U32(sealer);
  w.U64(transactions.size());
  for (const Transaction& tx : transactions) w.Fixed(tx.Encode());
  return Sha256(w.bytes());
}

Bytes Block::Encode() const {
  ByteWriter w;
  w.U64(index);
  w.Fixed(prev_hash);
  w.U32(sealer);
  w.U64(transactions.size());
  for (const Transaction& tx : transactions) w.Fixed(tx.Encode());
  w.Fixed(hash);
  return w.Take();
}

absl::StatusOr<Block> Block::Decode(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  Block b;
  FAIRDL_READ(b.index, r.U64());
  if (absl::Status s = r.Fixed(b.prev_hash); !s.ok()) return s;
  FAIRDL_READ(b.sealer, r.U32());
  uint64_t n = 0;
  FAIRDL_READ(n, r.U64());
  if (n > r.remaining()) return absl::InvalidArgumentError("bad tx count");
  for (uint64_t i = 0; i < n; ++i) {
    absl::StatusOr<Transaction> tx = Transaction::Decode(r);
    if (!tx.ok()) return tx.status();
    b.transactions.push_back(*std::move(tx));
  }
  if (absl::Status s = r.Fixed(b.hash); !s.ok()) return s;
  if (!r.done()) return absl::InvalidArgumentError("trailing block bytes");
  return b;
}

}  // namespace fairdl

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

#ifndef FAIRDL_LEDGER_TRANSACTION_H_
#define FAIRDL_LEDGER_TRANSACTION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/types.h"
#include "fairdl/ledger/bytes.h"
#include "fairdl/ledger/crypto.h"

namespace fairdl {

enum class TxKind : uint8_t {
  kRegister = 0,
  kPurchaseOrder = 1,
  kFulfillment = 2,
  kPunishment = 3,
  kTokenTransfer = 4,
};

std::string_view TxKindName(TxKind kind);
absl::StatusOr<TxKind> ParseTxKind(std::string_view name);

inline constexpr PartyId kNoParty = 0xffffffffu;

// Field use by kind:
//   register:        subject = new party, amount = minted tokens,
//                    sign_key / box_key = its public keys; self-signed.
//   purchase_order:  author = buyer, counterparty = seller, count gradients
//                    for `amount` tokens, box_key = buyer's pk.
//   fulfillment:     author = seller, counterparty = buyer, order_ref,
//                    payload_hash of the encrypted envelope, amount paid.
//   punishment:      author = leader, subject = punished party,
//                    counterparty = beneficiary (kNoParty for exclusion),
//                    amount = fine, `exclusion` marks consensus removal.
//   token_transfer:  author = leader, returns the escrow of the expired
//                    order `order_ref` to counterparty = buyer; subject is
//                    the order's seller.
struct Transaction {
  TxKind kind = TxKind::kRegister;
  uint64_t block = 0;
  PartyId author = 0;
  PartyId subject = kNoParty;
  PartyId counterparty = kNoParty;
  int64_t amount = 0;
  uint64_t count = 0;
  bool exclusion = false;
  Hash order_ref{};
  Hash payload_hash{};
  PublicKey sign_key{};
  PublicKey box_key{};
  std::string memo;
  Signature signature{};

  // Canonical bytes covered by the signature.
  Bytes SigningBytes() const;
  Bytes Encode() const;
  static absl::StatusOr<Transaction> Decode(ByteReader& reader);
  // Hash of the full encoding; used as the transaction id.
  Hash Id() const { return Sha256(Encode()); }

  void SignWith(const SigningSecret& secret) {
    signature = Sign(secret, SigningBytes());
  }

  bool operator==(const Transaction&) const = default;
};

struct Block {
  uint64_t index = 0;
  Hash prev_hash{};
  PartyId sealer = 0;
  std::vector<Transaction> transactions;
  Hash hash{};

  Hash ComputeHash() const;
  Bytes Encode() const;
  static absl::StatusOr<Block> Decode(std::span<const uint8_t> bytes);

  bool operator==(const Block&) const = default;
};

}  // namespace fairdl

#endif  // FAIRDL_LEDGER_TRANSACTION_H_

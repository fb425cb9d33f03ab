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

#include "fairdl/ledger/ledger.h"

#include <algorithm>

#include "absl/strings/str_format.h"

namespace fairdl {
namespace {

bool IsZero(const Hash& h) {
  return std::all_of(h.begin(), h.end(), [](uint8_t b) { return b == 0; });
}

absl::Status Reject(const Transaction& tx, std::string_view why) {
  return absl::FailedPreconditionError(absl::StrFormat(
      "%s by party %d rejected: %s", std::string(TxKindName(tx.kind)),
      tx.author, std::string(why)));
}

}  // namespace

PartyId LedgerState::LeaderFor(uint64_t block) const {
  std::vector<PartyId> active = ActiveParties();
  if (active.empty()) return kNoParty;
  return active[block % active.size()];
}

std::vector<PartyId> LedgerState::ActiveParties() const {
  std::vector<PartyId> out;
  for (const auto& [p, key] : sign_keys_) {
    if (!excluded_.count(p)) out.push_back(p);
  }
  return out;
}

int64_t LedgerState::Balance(PartyId p) const {
  auto it = balances_.find(p);
  return it == balances_.end() ? 0 : it->second;
}

int64_t LedgerState::Escrowed(PartyId p) const {
  int64_t sum = 0;
  for (const auto& [id, order] : orders_) {
    if (order.buyer == p && order.status == OrderStatus::kOpen) sum += order.amount;
  }
  return sum;
}

int64_t LedgerState::TotalTokens() const {
  int64_t sum = 0;
  for (const auto& [p, b] : balances_) sum += b;
  for (const auto& [id, order] : orders_) {
    if (order.status == OrderStatus::kOpen) sum += order.amount;
  }
  return sum;
}

const OrderState* LedgerState::FindOrder(const Hash& id) const {
  auto it = orders_.find(id);
  return it == orders_.end() ? nullptr : &it->second;
}

std::vector<Hash> LedgerState::OpenOrders() const {
  std::vector<Hash> out;
  for (const Hash& id : order_sequence_) {
    if (orders_.at(id).status == OrderStatus::kOpen) out.push_back(id);
  }
  return out;
}

const PublicKey* LedgerState::SigningKey(PartyId p) const {
  auto it = sign_keys_.find(p);
  return it == sign_keys_.end() ? nullptr : &it->second;
}

const PublicKey* LedgerState::BoxKey(PartyId p) const {
  auto it = box_keys_.find(p);
  return it == box_keys_.end() ? nullptr : &it->second;
}

absl::Status LedgerState::Apply(const Transaction& tx, uint64_t block,
                                PartyId leader, bool check_signature) {
  if (tx.block != block) return Reject(tx, "wrong block index");
  if (tx.amount < 0) return Reject(tx, "negative amount");

  if (tx.kind == TxKind::kRegister) {
    if (tx.subject != tx.author || tx.author == kNoParty) {
      return Reject(tx, "registration must be self-authored");
    }
    if (IsRegistered(tx.author)) return Reject(tx, "duplicate party id");
    if (check_signature && !Verify(tx.sign_key, tx.SigningBytes(), tx.signature)) {
      return Reject(tx, "bad signature");
    }
    sign_keys_[tx.author] = tx.sign_key;
    box_keys_[tx.author] = tx.box_key;
    balances_[tx.author] = tx.amount;
    return absl::OkStatus();
  }
  if (block == 0) return Reject(tx, "genesis holds registrations only");

  const PublicKey* key = SigningKey(tx.author);
  if (key == nullptr) return Reject(tx, "unknown author");
  const bool system_tx =
      tx.kind == TxKind::kPunishment || tx.kind == TxKind::kTokenTransfer;
  // The leader is fixed at block start and keeps sealing rights for the
  // block even if it is excluded part-way through.
  if (IsExcluded(tx.author) && !system_tx) {
    return Reject(tx, "author is excluded");
  }
  if (system_tx && tx.author != leader) {
    return Reject(tx, "system transactions must come from the round leader");
  }
  if (check_signature && !Verify(*key, tx.SigningBytes(), tx.signature)) {
    return Reject(tx, "bad signature");
  }

  switch (tx.kind) {
    case TxKind::kPurchaseOrder: {
      if (!IsRegistered(tx.counterparty) || IsExcluded(tx.counterparty)) {
        return Reject(tx, "seller is not an active party");
      }
      if (tx.counterparty == tx.author) return Reject(tx, "self purchase");
      if (tx.count == 0) return Reject(tx, "empty order");
      if (tx.amount > Balance(tx.author)) return Reject(tx, "insufficient balance");
      const Hash id = tx.Id();
      if (orders_.count(id)) return Reject(tx, "duplicate order");
      balances_[tx.author] -= tx.amount;
      orders_[id] = OrderState{id,      tx.author, tx.counterparty, tx.count,
                               tx.amount, block,   tx.box_key};
      order_sequence_.push_back(id);
      return absl::OkStatus();
    }
    case TxKind::kFulfillment: {
      auto it = orders_.find(tx.order_ref);
      if (it == orders_.end()) return Reject(tx, "unknown order");
      OrderState& order = it->second;
      if (order.status != OrderStatus::kOpen) return Reject(tx, "order is closed");
      if (order.seller != tx.author || order.buyer != tx.counterparty) {
        return Reject(tx, "parties do not match the order");
      }
      if (tx.amount != order.amount || tx.count != order.count) {
        return Reject(tx, "terms do not match the order");
      }
      if (IsZero(tx.payload_hash)) return Reject(tx, "missing payload hash");
      order.status = OrderStatus::kFulfilled;
      order.payload_hash = tx.payload_hash;
      balances_[tx.author] += order.amount;
      return absl::OkStatus();
    }
    case TxKind::kPunishment: {
      if (!IsRegistered(tx.subject)) return Reject(tx, "unknown punished party");
      if (tx.amount > Balance(tx.subject)) return Reject(tx, "fine exceeds balance");
      if (tx.amount > 0 && !IsRegistered(tx.counterparty)) {
        return Reject(tx, "fine needs a registered beneficiary");
      }
      if (tx.exclusion) {
        if (IsExcluded(tx.subject)) return Reject(tx, "already excluded");
        excluded_.insert(tx.subject);
      }
      balances_[tx.subject] -= tx.amount;
      if (tx.amount > 0) balances_[tx.counterparty] += tx.amount;
      return absl::OkStatus();
    }
    case TxKind::kTokenTransfer: {
      auto it = orders_.find(tx.order_ref);
      if (it == orders_.end()) return Reject(tx, "refund names no order");
      OrderState& order = it->second;
      if (order.status != OrderStatus::kOpen) return Reject(tx, "order is closed");
      if (tx.counterparty != order.buyer || tx.amount != order.amount) {
        return Reject(tx, "refund does not match escrow");
      }
      order.status = OrderStatus::kExpired;
      balances_[order.buyer] += order.amount;
      return absl::OkStatus();
    }
    case TxKind::kRegister:
      break;
  }
  return Reject(tx, "unhandled kind");
}

absl::StatusOr<Ledger> Ledger::CreateGenesis(
    std::vector<Transaction> registrations) {
  if (registrations.size() < 2) {
    return absl::InvalidArgumentError("genesis needs at least two parties");
  }
  Ledger ledger;
  for (const Transaction& tx : registrations) {
    if (tx.kind != TxKind::kRegister) {
      return absl::InvalidArgumentError("genesis accepts registrations only");
    }
    if (absl::Status s = ledger.state_.Apply(tx, 0, kNoParty); !s.ok()) return s;
    ledger.pending_.push_back(tx);
  }
  ledger.leader_ = ledger.state_.LeaderFor(0);
  ledger.Seal();
  return ledger;
}

absl::StatusOr<Hash> Ledger::Submit(const Transaction& tx) {
  if (absl::Status s = state_.Apply(tx, pending_index(), leader_); !s.ok()) {
    return s;
  }
  pending_.push_back(tx);
  return tx.Id();
}

const Block& Ledger::Seal() {
  Block b;
  b.index = pending_index();
  if (!blocks_.empty()) b.prev_hash = blocks_.back().hash;
  b.sealer = leader_;
  b.transactions = std::move(pending_);
  pending_.clear();
  b.hash = b.ComputeHash();
  blocks_.push_back(std::move(b));
  leader_ = state_.LeaderFor(pending_index());
  return blocks_.back();
}

absl::Status CheckChain(const std::vector<Block>& chain) {
  if (chain.empty()) return absl::InvalidArgumentError("empty chain");
  for (size_t i = 0; i < chain.size(); ++i) {
    const Block& b = chain[i];
    if (b.index != i) {
      return absl::DataLossError(absl::StrFormat("block %d has index %d", i, b.index));
    }
    const Hash expected_prev = i == 0 ? Hash{} : chain[i - 1].hash;
    if (b.prev_hash != expected_prev) {
      return absl::DataLossError(absl::StrFormat("block %d breaks the prev link", i));
    }
    if (b.ComputeHash() != b.hash) {
      return absl::DataLossError(absl::StrFormat("block %d hash mismatch", i));
    }
  }
  LedgerState state;
  for (const Block& b : chain) {
    const PartyId leader = b.index == 0 ? kNoParty : state.LeaderFor(b.index);
    for (const Transaction& tx : b.transactions) {
      if (absl::Status s = state.Apply(tx, b.index, leader); !s.ok()) {
        return absl::DataLossError(
            absl::StrFormat("block %d: %s", b.index, s.message()));
      }
    }
    const PartyId expected_sealer = state.LeaderFor(b.index);
    if (b.index == 0 ? b.sealer != expected_sealer : b.sealer != leader) {
      return absl::DataLossError(
          absl::StrFormat("block %d sealed by %d, not the leader", b.index, b.sealer));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::map<PartyId, int64_t>> ReplayBalances(
    const std::vector<Block>& chain) {
  if (absl::Status s = CheckChain(chain); !s.ok()) return s;
  LedgerState state;
  for (const Block& b : chain) {
    const PartyId leader = b.index == 0 ? kNoParty : state.LeaderFor(b.index);
    for (const Transaction& tx : b.transactions) {
      if (absl::Status s = state.Apply(tx, b.index, leader, false); !s.ok()) return s;
    }
  }
  return state.balances();
}

Transaction MakeRegistration(const KeyPair& keys, PartyId party, int64_t tokens,
                             uint64_t block) {
  Transaction tx;
  tx.kind = TxKind::kRegister;
  tx.block = block;
  tx.author = party;
  tx.subject = party;
  tx.amount = tokens;
  tx.sign_key = keys.sign_public;
  tx.box_key = keys.box_public;
  tx.SignWith(keys.sign_secret);
  return tx;
}

Transaction MakePurchaseOrder(const KeyPair& buyer_keys, PartyId buyer,
                              PartyId seller, uint64_t count, int64_t tokens,
                              uint64_t block) {
  Transaction tx;
  tx.kind = TxKind::kPurchaseOrder;
  tx.block = block;
  tx.author = buyer;
  tx.counterparty = seller;
  tx.count = count;
  tx.amount = tokens;
  tx.box_key = buyer_keys.box_public;
  tx.SignWith(buyer_keys.sign_secret);
  return tx;
}

Transaction MakeFulfillment(const KeyPair& seller_keys, const OrderState& order,
                            const Hash& payload_hash, uint64_t block) {
  Transaction tx;
  tx.kind = TxKind::kFulfillment;
  tx.block = block;
  tx.author = order.seller;
  tx.counterparty = order.buyer;
  tx.count = order.count;
  tx.amount = order.amount;
  tx.order_ref = order.id;
  tx.payload_hash = payload_hash;
  tx.SignWith(seller_keys.sign_secret);
  return tx;
}

Transaction MakePunishment(const KeyPair& leader_keys, PartyId leader,
                           PartyId punished, PartyId beneficiary, int64_t fine,
                           bool exclusion, const Hash& order_ref,
                           std::string memo, uint64_t block) {
  Transaction tx;
  tx.kind = TxKind::kPunishment;
  tx.block = block;
  tx.author = leader;
  tx.subject = punished;
  tx.counterparty = beneficiary;
  tx.amount = fine;
  tx.exclusion = exclusion;
  tx.order_ref = order_ref;
  tx.memo = std::move(memo);
  tx.SignWith(leader_keys.sign_secret);
  return tx;
}

Transaction MakeRefund(const KeyPair& leader_keys, PartyId leader,
                       const OrderState& order, uint64_t block) {
  Transaction tx;
  tx.kind = TxKind::kTokenTransfer;
  tx.block = block;
  tx.author = leader;
  tx.subject = order.seller;
  tx.counterparty = order.buyer;
  tx.amount = order.amount;
  tx.count = order.count;
  tx.order_ref = order.id;
  tx.memo = "escrow expiry";
  tx.SignWith(leader_keys.sign_secret);
  return tx;
}

}  // namespace fairdl

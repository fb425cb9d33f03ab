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

#ifndef FAIRDL_LEDGER_LEDGER_H_
#define FAIRDL_LEDGER_LEDGER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/common/types.h"
#include "fairdl/ledger/crypto.h"
#include "fairdl/ledger/transaction.h"

namespace fairdl {

enum class OrderStatus { kOpen, kFulfilled, kExpired };

struct OrderState {
  Hash id{};
  PartyId buyer = 0;
  PartyId seller = 0;
  uint64_t count = 0;
  int64_t amount = 0;
  uint64_t block = 0;
  PublicKey buyer_box_key{};
  OrderStatus status = OrderStatus::kOpen;
  Hash payload_hash{};
};

struct HashOf {
  size_t operator()(const Hash& h) const {
    size_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | h[i];
    return v;
  }
};

// The replicated state machine: registrations, balances, escrow and
// exclusions. Every transaction is validated against it before it is
// accepted, both live and when a chain is replayed.
class LedgerState {
 public:
  // Validates `tx` for inclusion in block `block` sealed by `leader` and
  // applies it. Leaves the state untouched on error.
  absl::Status Apply(const Transaction& tx, uint64_t block, PartyId leader,
                     bool check_signature = true);

  // Leader of the next block: active parties in id order, rotating by
  // block index.
  PartyId LeaderFor(uint64_t block) const;

  bool IsRegistered(PartyId p) const { return sign_keys_.count(p) > 0; }
  bool IsExcluded(PartyId p) const { return excluded_.count(p) > 0; }
  std::vector<PartyId> ActiveParties() const;
  int64_t Balance(PartyId p) const;
  int64_t Escrowed(PartyId p) const;
  // Balances plus open escrow.
  int64_t TotalTokens() const;
  const std::map<PartyId, int64_t>& balances() const { return balances_; }
  const OrderState* FindOrder(const Hash& id) const;
  std::vector<Hash> OpenOrders() const;
  const PublicKey* SigningKey(PartyId p) const;
  const PublicKey* BoxKey(PartyId p) const;

 private:
  std::map<PartyId, PublicKey> sign_keys_;
  std::map<PartyId, PublicKey> box_keys_;
  std::map<PartyId, int64_t> balances_;
  std::set<PartyId> excluded_;
  absl::flat_hash_map<Hash, OrderState, HashOf> orders_;
  std::vector<Hash> order_sequence_;
};

// Append-only chain with a pending block. Block 0 holds registrations only.
class Ledger {
 public:
  // `registrations` are self-signed register transactions for block 0.
  static absl::StatusOr<Ledger> CreateGenesis(
      std::vector<Transaction> registrations);

  // Index of the block currently being assembled.
  uint64_t pending_index() const { return blocks_.size(); }
  PartyId leader() const { return leader_; }
  absl::StatusOr<Hash> Submit(const Transaction& tx);
  const Block& Seal();

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Transaction>& pending() const { return pending_; }
  const LedgerState& state() const { return state_; }

 private:
  Ledger() = default;

  LedgerState state_;
  std::vector<Block> blocks_;
  std::vector<Transaction> pending_;
  PartyId leader_ = 0;
};

// Structural checks (indices, prev links, block hashes) over the whole chain
// first, then a full replay with signature and rule checks.
absl::Status CheckChain(const std::vector<Block>& chain);
inline bool VerifyChain(const std::vector<Block>& chain) {
  return CheckChain(chain).ok();
}
// Final available balances after replaying `chain`.
absl::StatusOr<std::map<PartyId, int64_t>> ReplayBalances(
    const std::vector<Block>& chain);

// Transaction builders. Each returns a signed transaction for `block`.
Transaction MakeRegistration(const KeyPair& keys, PartyId party, int64_t tokens,
                             uint64_t block);
Transaction MakePurchaseOrder(const KeyPair& buyer_keys, PartyId buyer,
                              PartyId seller, uint64_t count, int64_t tokens,
                              uint64_t block);
Transaction MakeFulfillment(const KeyPair& seller_keys, const OrderState& order,
                            const Hash& payload_hash, uint64_t block);
Transaction MakePunishment(const KeyPair& leader_keys, PartyId leader,
                           PartyId punished, PartyId beneficiary, int64_t fine,
                           bool exclusion, const Hash& order_ref,
                           std::string memo, uint64_t block);
Transaction MakeRefund(const KeyPair& leader_keys, PartyId leader,
                       const OrderState& order, uint64_t block);

}  // namespace fairdl

#endif  // FAIRDL_LEDGER_LEDGER_H_

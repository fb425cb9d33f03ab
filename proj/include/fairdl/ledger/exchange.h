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

#ifndef FAIRDL_LEDGER_EXCHANGE_H_
#define FAIRDL_LEDGER_EXCHANGE_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/ledger/crypto.h"
#include "fairdl/ledger/ledger.h"
#include "fairdl/numerics/matrix.h"
#include "fairdl/numerics/sparse_update.h"

namespace fairdl {

// Content-addressed blob store shared by all parties. With a directory,
// every blob is also written to <dir>/<sha256 hex>.
class PayloadStore {
 public:
  PayloadStore() = default;
  explicit PayloadStore(std::string directory) : directory_(std::move(directory)) {}

  absl::StatusOr<Hash> Put(const Bytes& blob);
  absl::StatusOr<Bytes> Get(const Hash& id) const;
  size_t size() const { return blobs_.size(); }

 private:
  std::string directory_;
  std::map<Hash, Bytes> blobs_;
};

struct Fulfillment {
  Hash tx_id{};
  EncryptedPayload payload;
  EnvelopeSecrets secrets;
};

// Seller side: encrypts `update` for the buyer, stores the envelope and
// submits the fulfillment. The update must carry exactly the ordered count.
absl::StatusOr<Fulfillment> FulfillOrder(Ledger& ledger, PayloadStore& store,
                                         const KeyPair& seller_keys,
                                         const Hash& order_id,
                                         const SparseUpdate& update, Rng& rng);

// Buyer side: fetches, checks the hash against the fulfillment record and
// decrypts.
absl::StatusOr<SparseUpdate> ReceiveOrder(const Ledger& ledger,
                                          const PayloadStore& store,
                                          const KeyPair& buyer_keys,
                                          const Hash& order_id);

// Public audit: re-encrypts the revealed plaintext with the revealed
// envelope secrets and compares against the recorded payload hash.
absl::StatusOr<bool> AuditOrder(const LedgerState& state, const Hash& order_id,
                                const Bytes& revealed_plaintext,
                                const EnvelopeSecrets& revealed_secrets);

// Settles a dispute raised by the buyer. When the seller's revelation is
// consistent with the record the buyer is fined, otherwise the seller is;
// the fine goes to the other side and is capped by the punished balance.
absl::StatusOr<Transaction> ResolveDispute(Ledger& ledger,
                                           const KeyPair& leader_keys,
                                           const Hash& order_id,
                                           const Bytes& revealed_plaintext,
                                           const EnvelopeSecrets& revealed_secrets,
                                           int64_t fine);

// Refunds every open order. Called at the end of each round.
absl::StatusOr<std::vector<Hash>> ExpireOpenOrders(Ledger& ledger,
                                                   const KeyPair& leader_keys);

Bytes EncodeMatrix(const Matrix& m);
absl::StatusOr<Matrix> DecodeMatrix(std::span<const uint8_t> bytes);

// One JSON object per block and line.
std::string ChainToJsonl(const std::vector<Block>& chain);
absl::StatusOr<std::vector<Block>> ChainFromJsonl(std::string_view text);

}  // namespace fairdl

#endif  // FAIRDL_LEDGER_EXCHANGE_H_

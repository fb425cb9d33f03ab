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

#include "fairdl/ledger/exchange.h"

#include <bit>
#include <filesystem>
#include <fstream>

#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace fairdl {

absl::StatusOr<Hash> PayloadStore::Put(const Bytes& blob) {
  const Hash id = Sha256(blob);
  if (!directory_.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    const std::string path = directory_ + "/" + ToHex(id);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(blob.data()),
              static_cast<std::streamsize>(blob.size()));
    if (!out) {
      return absl::InternalError(absl::StrFormat("cannot write %s", path));
    }
  }
  blobs_[id] = blob;
  return id;
}

absl::StatusOr<Bytes> PayloadStore::Get(const Hash& id) const {
  auto it = blobs_.find(id);
  if (it == blobs_.end()) {
    return absl::NotFoundError(absl::StrFormat("no payload %s", ToHex(id)));
  }
  return it->second;
}

absl::StatusOr<Fulfillment> FulfillOrder(Ledger& ledger, PayloadStore& store,
                                         const KeyPair& seller_keys,
                                         const Hash& order_id,
                                         const SparseUpdate& update, Rng& rng) {
  const OrderState* order = ledger.state().FindOrder(order_id);
  if (order == nullptr) return absl::NotFoundError("unknown order");
  if (order->status != OrderStatus::kOpen) {
    return absl::FailedPreconditionError("order already closed");
  }
  if (update.size() != order->count) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "order asks for %d gradients, update has %d", order->count, update.size()));
  }
  Fulfillment f;
  f.secrets = FreshEnvelopeSecrets(rng);
  absl::StatusOr<EncryptedPayload> payload =
      SealPayload(EncodeSparseUpdate(update), order->buyer_box_key, f.secrets);
  if (!payload.ok()) return payload.status();
  f.payload = *std::move(payload);
  absl::StatusOr<Hash> stored = store.Put(f.payload.Encode());
  if (!stored.ok()) return stored.status();
  absl::StatusOr<Hash> tx_id = ledger.Submit(
      MakeFulfillment(seller_keys, *order, *stored, ledger.pending_index()));
  if (!tx_id.ok()) return tx_id.status();
  f.tx_id = *tx_id;
  return f;
}

absl::StatusOr<SparseUpdate> ReceiveOrder(const Ledger& ledger,
                                          const PayloadStore& store,
                                          const KeyPair& buyer_keys,
                                          const Hash& order_id) {
  const OrderState* order = ledger.state().FindOrder(order_id);
  if (order == nullptr) return absl::NotFoundError("unknown order");
  if (order->status != OrderStatus::kFulfilled) {
    return absl::FailedPreconditionError("order not fulfilled");
  }
  absl::StatusOr<Bytes> blob = store.Get(order->payload_hash);
  if (!blob.ok()) return blob.status();
  if (Sha256(*blob) != order->payload_hash) {
    return absl::DataLossError("stored payload does not match its hash");
  }
  absl::StatusOr<EncryptedPayload> payload = EncryptedPayload::Decode(*blob);
  if (!payload.ok()) return payload.status();
  absl::StatusOr<Bytes> plain =
      OpenPayload(*payload, buyer_keys.box_public, buyer_keys.box_secret);
  if (!plain.ok()) return plain.status();
  absl::StatusOr<SparseUpdate> update = DecodeSparseUpdate(*plain);
  if (!update.ok()) return update.status();
  if (update->size() != order->count) {
    return absl::DataLossError("payload size differs from the order");
  }
  return update;
}

absl::StatusOr<bool> AuditOrder(const LedgerState& state, const Hash& order_id,
                                const Bytes& revealed_plaintext,
                                const EnvelopeSecrets& revealed_secrets) {
  const OrderState* order = state.FindOrder(order_id);
  if (order == nullptr) return absl::NotFoundError("unknown order");
  if (order->status != OrderStatus::kFulfilled) {
    return absl::FailedPreconditionError("order not fulfilled");
  }
  absl::StatusOr<EncryptedPayload> resealed =
      SealPayload(revealed_plaintext, order->buyer_box_key, revealed_secrets);
  if (!resealed.ok()) return false;
  return Sha256(resealed->Encode()) == order->payload_hash;
}

absl::StatusOr<Transaction> ResolveDispute(Ledger& ledger,
                                           const KeyPair& leader_keys,
                                           const Hash& order_id,
                                           const Bytes& revealed_plaintext,
                                           const EnvelopeSecrets& revealed_secrets,
                                           int64_t fine) {
  absl::StatusOr<bool> consistent =
      AuditOrder(ledger.state(), order_id, revealed_plaintext, revealed_secrets);
  if (!consistent.ok()) return consistent.status();
  const OrderState& order = *ledger.state().FindOrder(order_id);
  const PartyId punished = *consistent ? order.buyer : order.seller;
  const PartyId wronged = *consistent ? order.seller : order.buyer;
  const int64_t amount =
      std::min(std::max<int64_t>(fine, 0), ledger.state().Balance(punished));
  Transaction tx = MakePunishment(
      leader_keys, ledger.leader(), punished, wronged, amount, false, order_id,
      *consistent ? "false accusation" : "payload mismatch",
      ledger.pending_index());
  absl::StatusOr<Hash> id = ledger.Submit(tx);
  if (!id.ok()) return id.status();
  return tx;
}

absl::StatusOr<std::vector<Hash>> ExpireOpenOrders(Ledger& ledger,
                                                   const KeyPair& leader_keys) {
  std::vector<Hash> expired;
  for (const Hash& id : ledger.state().OpenOrders()) {
    const OrderState order = *ledger.state().FindOrder(id);
    absl::StatusOr<Hash> tx = ledger.Submit(
        MakeRefund(leader_keys, ledger.leader(), order, ledger.pending_index()));
    if (!tx.ok()) return tx.status();
    expired.push_back(id);
  }
  return expired;
}

Bytes EncodeMatrix(const Matrix& m) {
  ByteWriter w;
  w.U64(m.rows());
  w.U64(m.cols());
  for (double v : m.data()) w.U64(std::bit_cast<uint64_t>(v));
  return w.Take();
}

absl::StatusOr<Matrix> DecodeMatrix(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  absl::StatusOr<uint64_t> rows = r.U64();
  if (!rows.ok()) return rows.status();
  absl::StatusOr<uint64_t> cols = r.U64();
  if (!cols.ok()) return cols.status();
  if (*cols != 0 && *rows > r.remaining() / 8 / *cols) {
    return absl::InvalidArgumentError("matrix size exceeds payload");
  }
  std::vector<double> data(*rows * *cols);
  for (double& v : data) {
    absl::StatusOr<uint64_t> bits = r.U64();
    if (!bits.ok()) return bits.status();
    v = std::bit_cast<double>(*bits);
  }
  if (!r.done()) return absl::InvalidArgumentError("trailing matrix bytes");
  return Matrix::FromData(*rows, *cols, std::move(data));
}

namespace {

nlohmann::json TxToJson(const Transaction& tx) {
  return {{"kind", std::string(TxKindName(tx.kind))},
          {"block", tx.block},
          {"author", tx.author},
          {"subject", tx.subject},
          {"counterparty", tx.counterparty},
          {"amount", tx.amount},
          {"count", tx.count},
          {"exclusion", tx.exclusion},
          {"order_ref", ToHex(tx.order_ref)},
          {"payload_hash", ToHex(tx.payload_hash)},
          {"sign_key", ToHex(tx.sign_key)},
          {"box_key", ToHex(tx.box_key)},
          {"memo", tx.memo},
          {"signature", ToHex(tx.signature)}};
}

template <size_t N>
absl::Status HexField(const nlohmann::json& j, const char* name,
                      std::array<uint8_t, N>& out) {
  absl::StatusOr<std::array<uint8_t, N>> v =
      FixedFromHex<N>(j.at(name).get<std::string>());
  if (!v.ok()) return v.status();
  out = *v;
  return absl::OkStatus();
}

absl::StatusOr<Transaction> TxFromJson(const nlohmann::json& j) {
  Transaction tx;
  absl::StatusOr<TxKind> kind = ParseTxKind(j.at("kind").get<std::string>());
  if (!kind.ok()) return kind.status();
  tx.kind = *kind;
  tx.block = j.at("block").get<uint64_t>();
  tx.author = j.at("author").get<PartyId>();
  tx.subject = j.at("subject").get<PartyId>();
  tx.counterparty = j.at("counterparty").get<PartyId>();
  tx.amount = j.at("amount").get<int64_t>();
  tx.count = j.at("count").get<uint64_t>();
  tx.exclusion = j.at("exclusion").get<bool>();
  tx.memo = j.at("memo").get<std::string>();
  for (absl::Status s :
       {HexField(j, "order_ref", tx.order_ref),
        HexField(j, "payload_hash", tx.payload_hash),
        HexField(j, "sign_key", tx.sign_key), HexField(j, "box_key", tx.box_key),
        HexField(j, "signature", tx.signature)}) {
    if (!s.ok()) return s;
  }
  return tx;
}

}  // namespace

std::string ChainToJsonl(const std::vector<Block>& chain) {
  std::string out;
  for (const Block& b : chain) {
    nlohmann::json txs = nlohmann::json::array();
    for (const Transaction& tx : b.transactions) txs.push_back(TxToJson(tx));
    nlohmann::json j = {{"index", b.index},
                        {"prev_hash", ToHex(b.prev_hash)},
                        {"sealer", b.sealer},
                        {"transactions", std::move(txs)},
                        {"hash", ToHex(b.hash)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<Block>> ChainFromJsonl(std::string_view text) {
  std::vector<Block> chain;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n',
                      absl::SkipWhitespace())) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) return absl::InvalidArgumentError("malformed block line");
    try {
      Block b;
      b.index = j.at("index").get<uint64_t>();
      b.sealer = j.at("sealer").get<PartyId>();
      if (absl::Status s = HexField(j, "prev_hash", b.prev_hash); !s.ok()) return s;
      if (absl::Status s = HexField(j, "hash", b.hash); !s.ok()) return s;
      for (const auto& t : j.at("transactions")) {
        absl::StatusOr<Transaction> tx = TxFromJson(t);
        if (!tx.ok()) return tx.status();
        b.transactions.push_back(*std::move(tx));
      }
      chain.push_back(std::move(b));
    } catch (const nlohmann::json::exception& e) {
      return absl::InvalidArgumentError(
          absl::StrFormat("malformed block record: %s", e.what()));
    }
  }
  return chain;
}

}  // namespace fairdl

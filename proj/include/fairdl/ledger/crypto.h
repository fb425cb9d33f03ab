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

#ifndef FAIRDL_LEDGER_CRYPTO_H_
#define FAIRDL_LEDGER_CRYPTO_H_

#include <array>
#include <cstdint>
#include <span>

#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/ledger/bytes.h"

namespace fairdl {

// Ed25519 for signatures, X25519 + XSalsa20-Poly1305 (crypto_box) to wrap
// the symmetric key, XChaCha20-Poly1305 for payloads, SHA-256 for hashing.
using PublicKey = std::array<uint8_t, 32>;
using SigningSecret = std::array<uint8_t, 64>;
using BoxSecret = std::array<uint8_t, 32>;
using Signature = std::array<uint8_t, 64>;
using SymmetricKey = std::array<uint8_t, 32>;
using PayloadNonce = std::array<uint8_t, 24>;

Hash Sha256(std::span<const uint8_t> data);

struct KeyPair {
  PublicKey sign_public{};
  SigningSecret sign_secret{};
  PublicKey box_public{};
  BoxSecret box_secret{};

  // Keys derived from `rng` so runs are reproducible.
  static KeyPair Derive(Rng& rng);
};

Signature Sign(const SigningSecret& secret, std::span<const uint8_t> message);
bool Verify(const PublicKey& key, std::span<const uint8_t> message,
            const Signature& signature);

// Hybrid envelope: the payload is encrypted under a fresh symmetric key,
// which is itself boxed to the recipient with an ephemeral X25519 key.
struct EncryptedPayload {
  PublicKey ephemeral_public{};
  Bytes wrapped_key;  // fsk boxed to the recipient, with MAC
  PayloadNonce nonce{};
  Bytes ciphertext;   // payload with AEAD tag

  Bytes Encode() const;
  static absl::StatusOr<EncryptedPayload> Decode(std::span<const uint8_t> bytes);
  Hash Digest() const { return Sha256(Encode()); }
  bool operator==(const EncryptedPayload&) const = default;
};

// Everything the seller needs to re-create its envelope bit for bit.
struct EnvelopeSecrets {
  SymmetricKey fsk{};
  BoxSecret ephemeral_secret{};
  PayloadNonce nonce{};
  bool operator==(const EnvelopeSecrets&) const = default;
};

EnvelopeSecrets FreshEnvelopeSecrets(Rng& rng);

absl::StatusOr<EncryptedPayload> SealPayload(std::span<const uint8_t> plaintext,
                                             const PublicKey& recipient,
                                             const EnvelopeSecrets& secrets);
absl::StatusOr<Bytes> OpenPayload(const EncryptedPayload& payload,
                                  const PublicKey& recipient_public,
                                  const BoxSecret& recipient_secret);

}  // namespace fairdl

#endif  // FAIRDL_LEDGER_CRYPTO_H_

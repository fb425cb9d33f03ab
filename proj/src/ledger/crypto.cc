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

#include "fairdl/ledger/crypto.h"

#include <sodium.h>

#include <cstdlib>

namespace fairdl {
namespace {

void EnsureSodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) std::abort();
    return true;
  }();
  (void)ready;
}

std::array<uint8_t, crypto_box_NONCEBYTES> BoxNonce(const PublicKey& ephemeral,
                                                    const PublicKey& recipient) {
  ByteWriter w;
  w.Fixed(ephemeral);
  w.Fixed(recipient);
  const Hash h = Sha256(w.bytes());
  std::array<uint8_t, crypto_box_NONCEBYTES> nonce;
  std::copy(h.begin(), h.begin() + nonce.size(), nonce.begin());
  return nonce;
}

}  // namespace

Hash Sha256(std::span<const uint8_t> data) {
  EnsureSodium();
  Hash out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

KeyPair KeyPair::Derive(Rng& rng) {
  EnsureSodium();
  KeyPair k;
  std::array<uint8_t, crypto_sign_SEEDBYTES> sign_seed;
  std::array<uint8_t, crypto_box_SEEDBYTES> box_seed;
  rng.FillBytes(sign_seed);
  rng.FillBytes(box_seed);
  crypto_sign_seed_keypair(k.sign_public.data(), k.sign_secret.data(),
                           sign_seed.data());
  crypto_box_seed_keypair(k.box_public.data(), k.box_secret.data(),
                          box_seed.data());
  sodium_memzero(sign_seed.data(), sign_seed.size());
  sodium_memzero(box_seed.data(), box_seed.size());
  return k;
}

Signature Sign(const SigningSecret& secret, std::span<const uint8_t> message) {
  EnsureSodium();
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret.data());
  return sig;
}

bool Verify(const PublicKey& key, std::span<const uint8_t> message,
            const Signature& signature) {
  EnsureSodium();
  return crypto_sign_verify_detached(signature.data(), message.data(),
                                     message.size(), key.data()) == 0;
}

Bytes EncryptedPayload::Encode() const {
  ByteWriter w;
  w.Fixed(ephemeral_public);
  w.Var(wrapped_key);
  w.Fixed(nonce);
  w.Var(ciphertext);
  return w.Take();
}

absl::StatusOr<EncryptedPayload> EncryptedPayload::Decode(
    std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  EncryptedPayload p;
  if (absl::Status s = r.Fixed(p.ephemeral_public); !s.ok()) return s;
  absl::StatusOr<Bytes> wrapped = r.Var();
  if (!wrapped.ok()) return wrapped.status();
  p.wrapped_key = *std::move(wrapped);
  if (absl::Status s = r.Fixed(p.nonce); !s.ok()) return s;
  absl::StatusOr<Bytes> ct = r.Var();
  if (!ct.ok()) return ct.status();
  p.ciphertext = *std::move(ct);
  if (!r.done()) return absl::InvalidArgumentError("trailing payload bytes");
  return p;
}

EnvelopeSecrets FreshEnvelopeSecrets(Rng& rng) {
  EnvelopeSecrets s;
  rng.FillBytes(s.fsk);
  rng.FillBytes(s.ephemeral_secret);
  rng.FillBytes(s.nonce);
  return s;
}

absl::StatusOr<EncryptedPayload> SealPayload(std::span<const uint8_t> plaintext,
                                             const PublicKey& recipient,
                                             const EnvelopeSecrets& secrets) {
  EnsureSodium();
  EncryptedPayload p;
  p.nonce = secrets.nonce;
  if (crypto_scalarmult_base(p.ephemeral_public.data(),
                             secrets.ephemeral_secret.data()) != 0) {
    return absl::InternalError("ephemeral key derivation failed");
  }
  p.ciphertext.resize(plaintext.size() +
                      crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long ct_len = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      p.ciphertext.data(), &ct_len, plaintext.data(), plaintext.size(), nullptr,
      0, nullptr, p.nonce.data(), secrets.fsk.data());
  p.ciphertext.resize(ct_len);

  const auto box_nonce = BoxNonce(p.ephemeral_public, recipient);
  p.wrapped_key.resize(secrets.fsk.size() + crypto_box_MACBYTES);
  if (crypto_box_easy(p.wrapped_key.data(), secrets.fsk.data(),
                      secrets.fsk.size(), box_nonce.data(), recipient.data(),
                      secrets.ephemeral_secret.data()) != 0) {
    return absl::InvalidArgumentError("recipient public key rejected");
  }
  return p;
}

absl::StatusOr<Bytes> OpenPayload(const EncryptedPayload& payload,
                                  const PublicKey& recipient_public,
                                  const BoxSecret& recipient_secret) {
  EnsureSodium();
  if (payload.wrapped_key.size() != crypto_box_MACBYTES + 32 ||
      payload.ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    return absl::DataLossError("malformed envelope");
  }
  SymmetricKey fsk;
  const auto box_nonce = BoxNonce(payload.ephemeral_public, recipient_public);
  if (crypto_box_open_easy(fsk.data(), payload.wrapped_key.data(),
                           payload.wrapped_key.size(), box_nonce.data(),
                           payload.ephemeral_public.data(),
                           recipient_secret.data()) != 0) {
    return absl::PermissionDeniedError("cannot unwrap payload key");
  }
  Bytes plain(payload.ciphertext.size() -
              crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long plain_len = 0;
  const int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      plain.data(), &plain_len, nullptr, payload.ciphertext.data(),
      payload.ciphertext.size(), nullptr, 0, payload.nonce.data(), fsk.data());
  sodium_memzero(fsk.data(), fsk.size());
  if (rc != 0) return absl::DataLossError("payload authentication failed");
  plain.resize(plain_len);
  return plain;
}

}  // namespace fairdl

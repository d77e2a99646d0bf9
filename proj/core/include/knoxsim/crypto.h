// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Thin wrappers over libcrypto. Everything here is deterministic; callers
// supply randomness (IVs, seeds) explicitly.

#ifndef KNOXSIM_CRYPTO_H_
#define KNOXSIM_CRYPTO_H_

#include <array>
#include <memory>
#include <optional>

#include "knoxsim/bytes.h"

namespace knoxsim::crypto {

inline constexpr size_t kSha1Size = 20;
inline constexpr size_t kMd5Size = 16;
inline constexpr size_t kSha256Size = 32;
inline constexpr size_t kAesBlockSize = 16;
inline constexpr size_t kEd25519PublicKeySize = 32;
inline constexpr size_t kEd25519SignatureSize = 64;

using Digest256 = std::array<uint8_t, kSha256Size>;

Bytes Sha1(ByteView data);
Bytes Md5(ByteView data);
Digest256 Sha256(ByteView data);

// Incremental SHA-1 whose Digest() finalizes and then resets the running
// state, the way java.security.MessageDigest.digest() behaves.
class Sha1Hasher {
 public:
  Sha1Hasher();
  ~Sha1Hasher();
  Sha1Hasher(const Sha1Hasher&) = delete;
  Sha1Hasher& operator=(const Sha1Hasher&) = delete;

  void Update(ByteView data);
  void Update(uint8_t byte);
  Bytes Digest();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Digest256 HmacSha256(ByteView key, ByteView data);

// RFC 8018 PBKDF2 with HMAC-SHA256.
Bytes Pbkdf2HmacSha256(ByteView password, ByteView salt, uint32_t iterations,
                       size_t out_len);

// A single PBKDF2 output block T_i (1-based), so callers that only need the
// tail of a longer derivation can skip the leading blocks.
Digest256 Pbkdf2HmacSha256Block(ByteView password, ByteView salt,
                                uint32_t iterations, uint32_t block_index);

// AES-256-CBC without padding; plaintext length must be a multiple of 16.
Bytes Aes256CbcEncrypt(const Key256& key, ByteView iv, ByteView plaintext);
std::optional<Bytes> Aes256CbcDecrypt(const Key256& key, ByteView iv,
                                      ByteView ciphertext);

bool ConstantTimeEqual(ByteView a, ByteView b);

// Encrypt-then-MAC box: IV(16) || AES-256-CBC(PKCS#7 padded) || HMAC-SHA256
// over IV, ciphertext and `aad`.
Bytes BoxSeal(const Key256& enc_key, ByteView mac_key, ByteView iv,
              ByteView plaintext, ByteView aad);
// nullopt on truncation, tag mismatch or bad padding.
std::optional<Bytes> BoxOpen(const Key256& enc_key, ByteView mac_key,
                             ByteView box, ByteView aad);

// Ed25519 signing key built from a 32-byte seed.
class SigningKey {
 public:
  static SigningKey FromSeed(const Key256& seed);

  SigningKey(const SigningKey&);
  SigningKey& operator=(const SigningKey&);
  SigningKey(SigningKey&&) noexcept;
  SigningKey& operator=(SigningKey&&) noexcept;
  ~SigningKey();

  Bytes Sign(ByteView message) const;
  const Bytes& public_key() const { return public_key_; }

 private:
  SigningKey() = default;

  Key256 seed_{};
  Bytes public_key_;
};

bool VerifySignature(ByteView public_key, ByteView message, ByteView signature);

}  // namespace knoxsim::crypto

#endif  // KNOXSIM_CRYPTO_H_

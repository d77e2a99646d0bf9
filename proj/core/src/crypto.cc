// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// SHA256_Transform is deprecated in OpenSSL 3 but remains the only public
// entry point to the bare compression function.
#define OPENSSL_SUPPRESS_DEPRECATED

#include "knoxsim/crypto.h"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace knoxsim::crypto {
namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
struct PkeyDeleter {
  void operator()(EVP_PKEY* key) const { EVP_PKEY_free(key); }
};

using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

[[noreturn]] void Die(const char* what) {
  throw std::runtime_error(std::string("libcrypto failure: ") + what);
}

Bytes OneShot(const EVP_MD* md, ByteView data) {
  Bytes out(EVP_MD_get_size(md));
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1)
    Die("EVP_Digest");
  out.resize(len);
  return out;
}

void StoreBigEndian(const SHA256_CTX& ctx, uint8_t* out) {
  for (int i = 0; i < 8; ++i) {
    uint32_t h = ctx.h[i];
    out[4 * i] = static_cast<uint8_t>(h >> 24);
    out[4 * i + 1] = static_cast<uint8_t>(h >> 16);
    out[4 * i + 2] = static_cast<uint8_t>(h >> 8);
    out[4 * i + 3] = static_cast<uint8_t>(h);
  }
}

// HMAC-SHA256 keyed state: inner and outer contexts after absorbing the
// padded key block.
struct HmacPads {
  SHA256_CTX inner;
  SHA256_CTX outer;
};

HmacPads MakePads(ByteView key) {
  uint8_t block[SHA256_CBLOCK] = {};
  if (key.size() > SHA256_CBLOCK) {
    Digest256 hashed = Sha256(key);
    std::memcpy(block, hashed.data(), hashed.size());
  } else if (!key.empty()) {
    std::memcpy(block, key.data(), key.size());
  }
  HmacPads pads;
  uint8_t padded[SHA256_CBLOCK];
  for (int i = 0; i < SHA256_CBLOCK; ++i) padded[i] = block[i] ^ 0x36;
  SHA256_Init(&pads.inner);
  SHA256_Update(&pads.inner, padded, sizeof(padded));
  for (int i = 0; i < SHA256_CBLOCK; ++i) padded[i] = block[i] ^ 0x5c;
  SHA256_Init(&pads.outer);
  SHA256_Update(&pads.outer, padded, sizeof(padded));
  OPENSSL_cleanse(block, sizeof(block));
  OPENSSL_cleanse(padded, sizeof(padded));
  return pads;
}

}  // namespace

Bytes Sha1(ByteView data) { return OneShot(EVP_sha1(), data); }
Bytes Md5(ByteView data) { return OneShot(EVP_md5(), data); }

Digest256 Sha256(ByteView data) {
  Digest256 out;
  if (SHA256(data.data(), data.size(), out.data()) == nullptr) Die("SHA256");
  return out;
}

struct Sha1Hasher::Impl {
  MdCtx ctx{EVP_MD_CTX_new()};
};

Sha1Hasher::Sha1Hasher() : impl_(std::make_unique<Impl>()) {
  if (!impl_->ctx || EVP_DigestInit_ex(impl_->ctx.get(), EVP_sha1(), nullptr) != 1)
    Die("EVP_DigestInit_ex");
}

Sha1Hasher::~Sha1Hasher() = default;

void Sha1Hasher::Update(ByteView data) {
  if (EVP_DigestUpdate(impl_->ctx.get(), data.data(), data.size()) != 1)
    Die("EVP_DigestUpdate");
}

void Sha1Hasher::Update(uint8_t byte) { Update(ByteView(&byte, 1)); }

Bytes Sha1Hasher::Digest() {
  Bytes out(kSha1Size);
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(impl_->ctx.get(), out.data(), &len) != 1)
    Die("EVP_DigestFinal_ex");
  if (EVP_DigestInit_ex(impl_->ctx.get(), EVP_sha1(), nullptr) != 1)
    Die("EVP_DigestInit_ex");
  return out;
}

Digest256 HmacSha256(ByteView key, ByteView data) {
  HmacPads pads = MakePads(key);
  uint8_t inner_digest[kSha256Size];
  SHA256_Update(&pads.inner, data.data(), data.size());
  SHA256_Final(inner_digest, &pads.inner);
  Digest256 out;
  SHA256_Update(&pads.outer, inner_digest, sizeof(inner_digest));
  SHA256_Final(out.data(), &pads.outer);
  return out;
}

Digest256 Pbkdf2HmacSha256Block(ByteView password, ByteView salt,
                                uint32_t iterations, uint32_t block_index) {
  const HmacPads pads = MakePads(password);

  // U_1 = HMAC(P, S || INT(i))
  const uint8_t index_be[4] = {
      static_cast<uint8_t>(block_index >> 24),
      static_cast<uint8_t>(block_index >> 16),
      static_cast<uint8_t>(block_index >> 8), static_cast<uint8_t>(block_index)};
  SHA256_CTX ctx = pads.inner;
  uint8_t u[kSha256Size];
  SHA256_Update(&ctx, salt.data(), salt.size());
  SHA256_Update(&ctx, index_be, sizeof(index_be));
  SHA256_Final(u, &ctx);
  ctx = pads.outer;
  SHA256_Update(&ctx, u, sizeof(u));
  SHA256_Final(u, &ctx);

  Digest256 t;
  std::memcpy(t.data(), u, sizeof(u));

  // Every later U_j hashes exactly one 32-byte message after a 64-byte pad
  // block, so both compressions take a single pre-padded block.
  uint8_t block[SHA256_CBLOCK] = {};
  block[kSha256Size] = 0x80;
  block[SHA256_CBLOCK - 2] = 0x03;  // (64 + 32) * 8 = 768 bits
  for (uint32_t j = 1; j < iterations; ++j) {
    std::memcpy(block, u, kSha256Size);
    ctx = pads.inner;
    SHA256_Transform(&ctx, block);
    StoreBigEndian(ctx, block);
    ctx = pads.outer;
    SHA256_Transform(&ctx, block);
    StoreBigEndian(ctx, u);
    for (size_t k = 0; k < kSha256Size; ++k) t[k] ^= u[k];
  }
  OPENSSL_cleanse(u, sizeof(u));
  OPENSSL_cleanse(block, sizeof(block));
  return t;
}

Bytes Pbkdf2HmacSha256(ByteView password, ByteView salt, uint32_t iterations,
                       size_t out_len) {
  Bytes out;
  out.reserve(out_len);
  for (uint32_t i = 1; out.size() < out_len; ++i) {
    Digest256 block = Pbkdf2HmacSha256Block(password, salt, iterations, i);
    size_t take = std::min(block.size(), out_len - out.size());
    out.insert(out.end(), block.begin(), block.begin() + take);
  }
  return out;
}

namespace {
Bytes RunCipher(bool encrypt, const Key256& key, ByteView iv, ByteView input) {
  if (iv.size() != kAesBlockSize || input.size() % kAesBlockSize != 0)
    throw std::invalid_argument("AES-CBC: bad IV or unaligned input");
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx || EVP_CipherInit_ex(ctx.get(), EVP_aes_256_cbc(), nullptr,
                                key.data(), iv.data(), encrypt ? 1 : 0) != 1)
    Die("EVP_CipherInit_ex");
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  Bytes out(input.size() + kAesBlockSize);
  int len = 0;
  int total = 0;
  if (EVP_CipherUpdate(ctx.get(), out.data(), &len, input.data(),
                       static_cast<int>(input.size())) != 1)
    Die("EVP_CipherUpdate");
  total = len;
  if (EVP_CipherFinal_ex(ctx.get(), out.data() + total, &len) != 1)
    Die("EVP_CipherFinal_ex");
  total += len;
  out.resize(total);
  return out;
}
}  // namespace

Bytes Aes256CbcEncrypt(const Key256& key, ByteView iv, ByteView plaintext) {
  return RunCipher(true, key, iv, plaintext);
}

std::optional<Bytes> Aes256CbcDecrypt(const Key256& key, ByteView iv,
                                      ByteView ciphertext) {
  if (iv.size() != kAesBlockSize || ciphertext.size() % kAesBlockSize != 0)
    return std::nullopt;
  return RunCipher(false, key, iv, ciphertext);
}

bool ConstantTimeEqual(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

Bytes BoxSeal(const Key256& enc_key, ByteView mac_key, ByteView iv,
              ByteView plaintext, ByteView aad) {
  Bytes padded(plaintext.begin(), plaintext.end());
  const size_t pad = kAesBlockSize - plaintext.size() % kAesBlockSize;
  padded.insert(padded.end(), pad, static_cast<uint8_t>(pad));
  Bytes box(iv.begin(), iv.end());
  Append(box, Aes256CbcEncrypt(enc_key, iv, padded));
  Bytes mac_input = box;
  Append(mac_input, aad);
  Append(box, HmacSha256(mac_key, mac_input));
  return box;
}

std::optional<Bytes> BoxOpen(const Key256& enc_key, ByteView mac_key,
                             ByteView box, ByteView aad) {
  if (box.size() < 2 * kAesBlockSize + kSha256Size) return std::nullopt;
  const size_t body = box.size() - kSha256Size;
  if ((body - kAesBlockSize) % kAesBlockSize != 0) return std::nullopt;
  Bytes mac_input(box.begin(), box.begin() + body);
  Append(mac_input, aad);
  Digest256 tag = HmacSha256(mac_key, mac_input);
  if (!ConstantTimeEqual(tag, box.subspan(body))) return std::nullopt;
  auto padded = Aes256CbcDecrypt(enc_key, box.first(kAesBlockSize),
                                 box.subspan(kAesBlockSize, body - kAesBlockSize));
  if (!padded || padded->empty()) return std::nullopt;
  const uint8_t pad = padded->back();
  if (pad == 0 || pad > kAesBlockSize || pad > padded->size()) return std::nullopt;
  for (size_t i = padded->size() - pad; i < padded->size(); ++i) {
    if ((*padded)[i] != pad) return std::nullopt;
  }
  padded->resize(padded->size() - pad);
  return padded;
}

namespace {
Pkey PrivateKeyFromSeed(const Key256& seed) {
  Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(),
                                        seed.size()));
  if (!key) Die("EVP_PKEY_new_raw_private_key");
  return key;
}
}  // namespace

SigningKey SigningKey::FromSeed(const Key256& seed) {
  SigningKey out;
  out.seed_ = seed;
  Pkey key = PrivateKeyFromSeed(seed);
  size_t len = kEd25519PublicKeySize;
  out.public_key_.resize(len);
  if (EVP_PKEY_get_raw_public_key(key.get(), out.public_key_.data(), &len) != 1)
    Die("EVP_PKEY_get_raw_public_key");
  return out;
}

SigningKey::SigningKey(const SigningKey&) = default;
SigningKey& SigningKey::operator=(const SigningKey&) = default;
SigningKey::SigningKey(SigningKey&&) noexcept = default;
SigningKey& SigningKey::operator=(SigningKey&&) noexcept = default;
SigningKey::~SigningKey() { OPENSSL_cleanse(seed_.data(), seed_.size()); }

Bytes SigningKey::Sign(ByteView message) const {
  Pkey key = PrivateKeyFromSeed(seed_);
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
    Die("EVP_DigestSignInit");
  size_t len = kEd25519SignatureSize;
  Bytes sig(len);
  if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(),
                     message.size()) != 1)
    Die("EVP_DigestSign");
  sig.resize(len);
  return sig;
}

bool VerifySignature(ByteView public_key, ByteView message, ByteView signature) {
  if (public_key.size() != kEd25519PublicKeySize ||
      signature.size() != kEd25519SignatureSize)
    return false;
  Pkey key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                       public_key.data(), public_key.size()));
  if (!key) return false;
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
    return false;
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                          message.data(), message.size()) == 1;
}

}  // namespace knoxsim::crypto

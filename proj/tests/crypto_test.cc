// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/crypto.h"

#include <gtest/gtest.h>

#include "knoxsim/container_crypto.h"
#include "reference.h"
#include "test_support.h"

namespace knoxsim {
namespace {

using testing::RandomString;

oracle::Buffer B(ByteView v) { return oracle::Buffer(v.begin(), v.end()); }

TEST(PasswordHashTest, CurrentMatchesPinnedVectors) {
  EXPECT_EQ(HashPasswordCurrent("password", "salt"),
            "748b0f6c610178be9a1dd7d1a916bec0163a7ab7");
  EXPECT_EQ(HashPasswordCurrent("hunter77", "6b1f0e2a9c3d4e5f"),
            "bc4c8a2d23c808cb7bc3fe3085012fff4acaf267");
}

TEST(PasswordHashTest, LegacyMatchesPinnedVectors) {
  EXPECT_EQ(HashPasswordLegacy("password", "salt"),
            "c88e9c67041a74e0357befdff93f87dde0904214b305cadbb3bce54f3aa59c64fec00dea");
  EXPECT_EQ(HashPasswordLegacy("hunter77", "6b1f0e2a9c3d4e5f"),
            "a8f00e192373b0242e4aa1ed4c5c79842933d282ca934450295881ca8a4b23e80496f3e3");
}

TEST(PasswordHashTest, OracleAgreesWithPinnedVectors) {
  EXPECT_EQ(oracle::HashCurrent("password", "salt"),
            "748b0f6c610178be9a1dd7d1a916bec0163a7ab7");
  EXPECT_EQ(oracle::HashLegacy("hunter77", "6b1f0e2a9c3d4e5f"),
            "a8f00e192373b0242e4aa1ed4c5c79842933d282ca934450295881ca8a4b23e80496f3e3");
}

TEST(PasswordHashTest, RandomInputsMatchOracle) {
  DeterministicRng rng(11);
  for (int i = 0; i < 200; ++i) {
    std::string pw = RandomString(rng, 1 + rng.Uniform(20));
    std::string salt = RandomString(rng, rng.Uniform(17), "0123456789abcdef");
    std::string current = HashPasswordCurrent(pw, salt);
    std::string legacy = HashPasswordLegacy(pw, salt);
    ASSERT_EQ(current, oracle::HashCurrent(pw, salt)) << pw << "/" << salt;
    ASSERT_EQ(legacy, oracle::HashLegacy(pw, salt)) << pw << "/" << salt;
    ASSERT_EQ(current.size(), kCurrentHashLength);
    ASSERT_EQ(legacy.size(), kLegacyHashLength);
  }
}

TEST(PasswordHashTest, VerifyAcceptsBothFormats) {
  PasswordRecord current{HashPasswordCurrent("hunter77", "abc"), "abc"};
  PasswordRecord legacy{HashPasswordLegacy("hunter77", "abc"), "abc"};
  EXPECT_TRUE(*VerifyPassword(current, "hunter77"));
  EXPECT_FALSE(*VerifyPassword(current, "hunter78"));
  EXPECT_TRUE(*VerifyPassword(legacy, "hunter77"));
  EXPECT_FALSE(*VerifyPassword(legacy, "hunter78"));
  auto bad = VerifyPassword({"abcd", "abc"}, "hunter77");
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.error(), PasswordError::kMalformedRecord);
}

TEST(DigestTest, MatchesOpenSslEvp) {
  DeterministicRng rng(5);
  for (size_t len : {0u, 1u, 55u, 56u, 63u, 64u, 65u, 1000u}) {
    Bytes data = rng.NextBytes(len);
    EXPECT_EQ(B(crypto::Sha1(data)), oracle::Sha1(B(data)));
    EXPECT_EQ(B(crypto::Md5(data)), oracle::Md5(B(data)));
    EXPECT_EQ(B(crypto::Sha256(data)), oracle::Sha256(B(data)));
  }
}

TEST(DigestTest, IncrementalSha1ResetsAfterDigest) {
  crypto::Sha1Hasher h;
  h.Update(ToBytes("abc"));
  Bytes first = h.Digest();
  h.Update(ToBytes("abc"));
  EXPECT_EQ(h.Digest(), first);
  EXPECT_EQ(ToHex(first), "a9993e364706816aba3e25717850c26c9cd0d89d");
}

TEST(HmacTest, MatchesOpenSsl) {
  DeterministicRng rng(6);
  for (size_t key_len : {0u, 16u, 32u, 64u, 65u, 200u}) {
    Bytes key = rng.NextBytes(key_len);
    Bytes msg = rng.NextBytes(rng.Uniform(300));
    EXPECT_EQ(B(crypto::HmacSha256(key, msg)), oracle::HmacSha256(B(key), B(msg)));
  }
}

TEST(Pbkdf2Test, PinnedVector) {
  Bytes password(32, 'A');
  Bytes salt(16);
  for (size_t i = 0; i < salt.size(); ++i) salt[i] = static_cast<uint8_t>(i);
  EXPECT_EQ(ToHex(crypto::Pbkdf2HmacSha256(password, salt, 4096, 48)),
            "bcd3bc8a37e9721fef98dc127842c15205d97083cd32416bdbde4c5b8a6d3669"
            "70a4c54b9969469d7bf6e04ed04b18c3");
}

TEST(Pbkdf2Test, RandomParametersMatchOpenSsl) {
  DeterministicRng rng(7);
  for (int i = 0; i < 40; ++i) {
    Bytes password = rng.NextBytes(rng.Uniform(70));
    Bytes salt = rng.NextBytes(1 + rng.Uniform(32));
    uint32_t iterations = 1 + static_cast<uint32_t>(rng.Uniform(300));
    size_t length = 1 + rng.Uniform(100);
    ASSERT_EQ(B(crypto::Pbkdf2HmacSha256(password, salt, iterations, length)),
              oracle::Pbkdf2Sha256(B(password), B(salt), static_cast<int>(iterations), length));
  }
}

TEST(Pbkdf2Test, SingleBlockMatchesSlice) {
  DeterministicRng rng(8);
  Bytes password = rng.NextBytes(32);
  Bytes salt = rng.NextBytes(16);
  Bytes full = crypto::Pbkdf2HmacSha256(password, salt, 100, 96);
  for (uint32_t block = 1; block <= 3; ++block) {
    auto one = crypto::Pbkdf2HmacSha256Block(password, salt, 100, block);
    EXPECT_TRUE(std::equal(one.begin(), one.end(), full.begin() + 32 * (block - 1)));
  }
}

TEST(Base64Test, MatchesEvpEncodeBlock) {
  DeterministicRng rng(9);
  for (size_t len = 0; len < 80; ++len) {
    Bytes data = rng.NextBytes(len);
    ASSERT_EQ(Base64Encode(data), oracle::Base64(B(data))) << len;
  }
}

// Raw CBC without padding; BoxSeal pads.
TEST(AesTest, AlignedRoundTripMatchesOpenSsl) {
  DeterministicRng rng(10);
  Key256 key = rng.NextArray<32>();
  Bytes iv = rng.NextBytes(16);
  for (size_t len : {16u, 32u, 160u}) {
    Bytes plain = rng.NextBytes(len);
    Bytes ct = crypto::Aes256CbcEncrypt(key, iv, plain);
    ASSERT_EQ(ct.size(), len);
    EXPECT_EQ(oracle::Aes256CbcDecryptRaw(B(key), B(iv), B(ct)), B(plain));
    EXPECT_EQ(*crypto::Aes256CbcDecrypt(key, iv, ct), plain);
  }
  EXPECT_FALSE(crypto::Aes256CbcDecrypt(key, iv, Bytes(17)).has_value());
  EXPECT_FALSE(crypto::Aes256CbcDecrypt(key, Bytes(8), Bytes(16)).has_value());
}

TEST(BoxTest, TamperedBoxFailsToOpen) {
  DeterministicRng rng(12);
  Key256 key = rng.NextArray<32>();
  Bytes mac = rng.NextBytes(32);
  Bytes iv = rng.NextBytes(16);
  Bytes box = crypto::BoxSeal(key, mac, iv, ToBytes("secret"), ToBytes("aad"));
  EXPECT_EQ(*crypto::BoxOpen(key, mac, box, ToBytes("aad")), ToBytes("secret"));
  EXPECT_FALSE(crypto::BoxOpen(key, mac, box, ToBytes("other")).has_value());
  for (size_t i = 0; i < box.size(); ++i) {
    Bytes t = box;
    t[i] ^= 0x01;
    ASSERT_FALSE(crypto::BoxOpen(key, mac, t, ToBytes("aad")).has_value()) << i;
  }
}

TEST(SignatureTest, DeterministicAndBound) {
  Key256 seed{};
  seed[0] = 1;
  auto key = crypto::SigningKey::FromSeed(seed);
  Bytes msg = ToBytes("firmware");
  Bytes sig = key.Sign(msg);
  EXPECT_EQ(sig.size(), crypto::kEd25519SignatureSize);
  EXPECT_EQ(sig, crypto::SigningKey::FromSeed(seed).Sign(msg));
  EXPECT_TRUE(crypto::VerifySignature(key.public_key(), msg, sig));
  EXPECT_FALSE(crypto::VerifySignature(key.public_key(), ToBytes("firmwarf"), sig));
  sig[3] ^= 0x80;
  EXPECT_FALSE(crypto::VerifySignature(key.public_key(), msg, sig));
}

TEST(BytesTest, HexRoundTrip) {
  Bytes data = {0x00, 0x7f, 0x80, 0xff};
  EXPECT_EQ(ToHex(data), "007f80ff");
  EXPECT_EQ(*FromHex("007F80ff"), data);
  EXPECT_FALSE(FromHex("abc").has_value());
  EXPECT_FALSE(FromHex("zz").has_value());
  EXPECT_TRUE(ContainsSubsequence(data, Bytes{0x7f, 0x80}));
  EXPECT_FALSE(ContainsSubsequence(data, Bytes{0x80, 0x7f}));
}

TEST(RngTest, SeedReplaysIdentically) {
  DeterministicRng a(99), b(99), c(100);
  EXPECT_EQ(a.NextBytes(64), b.NextBytes(64));
  EXPECT_NE(a.NextBytes(64), c.NextBytes(64));
  for (int i = 0; i < 1000; ++i) ASSERT_LT(a.Uniform(7), 7u);
}

}  // namespace
}  // namespace knoxsim

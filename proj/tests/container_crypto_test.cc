// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/container_crypto.h"

#include <gtest/gtest.h>

#include "knoxsim/device.h"
#include "reference.h"
#include "test_support.h"

namespace knoxsim {
namespace {

using testing::IotaKey;
using testing::RandomString;

oracle::Buffer B(ByteView v) { return oracle::Buffer(v.begin(), v.end()); }

std::string V1(std::string_view pw, const Key256& key) {
  return DeriveEcryptfsKeyV1(pw, key)->chars();
}

std::string V2(std::string_view pw, const Key256& key) {
  return DeriveEcryptfsKeyV2(pw, key)->chars();
}

TEST(DeriveV1Test, PinnedVectors) {
  Key256 zero{};
  EXPECT_EQ(V1("1234567", zero), "ICAgICAgICAgICAgICAgICAgICAgICAg");
  EXPECT_EQ(V1("123456789", zero), "ICAgICAgICAgICAgICAgICAgICAgICAx");
  EXPECT_EQ(V1("hunter77", IotaKey()), "ICEiIyQlJicoKSorLC0uLzAxMjM0NTY3");
  EXPECT_EQ(V1("correcthorse", IotaKey()), "ICEiIyQlJicoKSorLC0uLzAxMjN3emRl");
}

TEST(DeriveV2Test, PinnedVectors) {
  EXPECT_EQ(V2("hunter77", IotaKey()), "PjQAgUN9BgGZ1ahdzBp4b2GDT4IWwb0W");
  EXPECT_EQ(V2("1234567", Key256{}), "cvhYaZVoB9tvH2A4l7r+9+o/0fiSRRB5");
}

TEST(DeriveV1Test, MatchesFormatXorBase64Transcription) {
  DeterministicRng rng(21);
  for (int i = 0; i < 2000; ++i) {
    std::string pw = RandomString(rng, 7 + rng.Uniform(26));
    Key256 key = rng.NextArray<32>();
    ASSERT_EQ(V1(pw, key), oracle::EcryptfsKeyV1(pw, B(key))) << pw;
  }
}

TEST(DeriveV2Test, MatchesPbkdf2Transcription) {
  DeterministicRng rng(22);
  for (int i = 0; i < 10; ++i) {
    std::string pw = RandomString(rng, 7 + rng.Uniform(20));
    Key256 key = rng.NextArray<32>();
    ASSERT_EQ(V2(pw, key), oracle::EcryptfsKeyV2(pw, B(key))) << pw;
  }
}

TEST(DeriveTest, LengthLimits) {
  Key256 key{};
  EXPECT_EQ(DeriveEcryptfsKeyV1("123456", key).error(), DeriveError::kPasswordTooShort);
  EXPECT_EQ(DeriveEcryptfsKeyV2("123456", key).error(), DeriveError::kPasswordTooShort);
  EXPECT_EQ(DeriveEcryptfsKeyV1(std::string(33, 'a'), key).error(),
            DeriveError::kPasswordTooLong);
  EXPECT_TRUE(DeriveEcryptfsKeyV1(std::string(32, 'a'), key).ok());
  EXPECT_TRUE(DeriveEcryptfsKeyV2(std::string(64, 'a'), key).ok());
}

TEST(DeriveTest, VersionDispatch) {
  EXPECT_EQ(DeriveEcryptfsKey(KnoxVersion::kV1_0, "hunter77", IotaKey())->chars(),
            V1("hunter77", IotaKey()));
  EXPECT_EQ(DeriveEcryptfsKey(KnoxVersion::kV2_3, "hunter77", IotaKey())->chars(),
            V2("hunter77", IotaKey()));
}

// Every password of up to eight characters is padded into bytes 24..31,
// which never reach the truncated Base64 output.
TEST(DeriveV1Test, ShortPasswordsAreIgnored) {
  DeterministicRng rng(23);
  for (int i = 0; i < 2000; ++i) {
    Key256 key = rng.NextArray<32>();
    std::string a = RandomString(rng, 7 + rng.Uniform(2));
    std::string b = RandomString(rng, 7 + rng.Uniform(2));
    ASSERT_EQ(V1(a, key), V1(b, key));
    // The same holds for the raw transcription at any length up to 8.
    ASSERT_EQ(oracle::EcryptfsKeyV1(a.substr(0, rng.Uniform(9)), B(key)), V1(b, key));
  }
}

TEST(DeriveV1Test, NinthCharacterChangesKey) {
  Key256 key = IotaKey();
  EXPECT_NE(V1("012345678", key), V1("112345678", key));
  EXPECT_EQ(V1("012345678", key), V1("012345679", key));
}

// Base64 maps 24 input bytes to exactly 32 output characters; the substring
// keeps those and drops the rest.
TEST(DeriveV1Test, TruncationBoundary) {
  DeterministicRng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    oracle::Buffer xored = oracle::Buffer(32);
    for (auto& b : xored) b = static_cast<uint8_t>(rng.Uniform(256));
    std::string base = oracle::Base64(xored).substr(0, 32);
    for (size_t i = 0; i < 32; ++i) {
      oracle::Buffer flipped = xored;
      flipped[i] ^= static_cast<uint8_t>(1 + rng.Uniform(255));
      bool changed = Base64Encode(flipped).substr(0, 32) != base;
      ASSERT_EQ(changed, i < 24) << "byte " << i;
    }
  }
}

TEST(EdkPayloadTest, SerializeParseRoundTrip) {
  DeterministicRng rng(25);
  auto key = DeriveEcryptfsKeyV1("hunter77", IotaKey());
  SealedDek sealed = SealDek(*key, rng);
  Bytes wire = sealed.payload.Serialize();
  ASSERT_EQ(wire.size(), kEdkPayloadSize);
  EXPECT_EQ(std::string(wire.begin(), wire.begin() + 4), "EDK1");
  EXPECT_EQ(*EdkPayload::Parse(wire), sealed.payload);
  Bytes bad_magic = wire;
  bad_magic[0] = 'X';
  EXPECT_FALSE(EdkPayload::Parse(bad_magic).has_value());
  wire.pop_back();
  EXPECT_FALSE(EdkPayload::Parse(wire).has_value());
}

// Unseal by hand: PBKDF2 48 bytes, HMAC check with bytes 32..47, AES-CBC
// decrypt with bytes 0..31.
TEST(EdkPayloadTest, LayoutMatchesIndependentUnseal) {
  DeterministicRng rng(26);
  auto key = DeriveEcryptfsKeyV1("hunter77", IotaKey());
  SealedDek sealed = SealDek(*key, rng);
  const EdkPayload& p = sealed.payload;
  oracle::Buffer mk = oracle::Pbkdf2Sha256(B(key->bytes()), B(p.salt), 4096, 48);
  oracle::Buffer mac_key(mk.begin() + 32, mk.end());
  oracle::Buffer cipher_key(mk.begin(), mk.begin() + 32);
  EXPECT_EQ(oracle::HmacSha256(mac_key, B(p.AuthenticatedPortion())), B(p.hmac));
  EXPECT_EQ(oracle::Aes256CbcDecryptRaw(cipher_key, B(p.iv), B(p.ciphertext)), B(sealed.dek));
}

TEST(UnsealTest, RightKeyOpensWrongKeyFails) {
  DeterministicRng rng(27);
  auto key = DeriveEcryptfsKeyV2("hunter77", IotaKey());
  SealedDek sealed = SealDek(*key, rng);
  EXPECT_EQ(*UnsealDek(sealed.payload, *key), sealed.dek);
  auto other = DeriveEcryptfsKeyV2("hunter78", IotaKey());
  EXPECT_EQ(UnsealDek(sealed.payload, *other).error(), UnsealError::kHmacMismatch);
}

TEST(UnsealTest, AnyBitFlipIsRejected) {
  DeterministicRng rng(28);
  auto key = DeriveEcryptfsKeyV1("hunter77", IotaKey());
  SealedDek sealed = SealDek(*key, rng);
  Bytes wire = sealed.payload.Serialize();
  for (size_t i = 4; i < wire.size(); i += 7) {
    Bytes t = wire;
    t[i] ^= 0x04;
    auto parsed = EdkPayload::Parse(t);
    ASSERT_TRUE(parsed.has_value());
    ASSERT_FALSE(UnsealDek(*parsed, *key).ok()) << i;
  }
}

TEST(RewrapTest, PreservesDekAcrossPasswordChanges) {
  DeterministicRng rng(29);
  Key256 tima = rng.NextArray<32>();
  auto key = DeriveEcryptfsKeyV2("start-pass-0", tima);
  SealedDek sealed = SealDek(*key, rng);
  EdkPayload payload = sealed.payload;
  for (int i = 1; i <= 10; ++i) {
    auto next = DeriveEcryptfsKeyV2("start-pass-" + std::to_string(i), tima);
    auto rewrapped = RewrapEdk(payload, *key, *next, rng);
    ASSERT_TRUE(rewrapped.ok());
    EXPECT_NE(rewrapped->salt, payload.salt);
    EXPECT_EQ(UnsealDek(*rewrapped, *key).error(), UnsealError::kHmacMismatch);
    payload = *rewrapped;
    key = next;
    ASSERT_EQ(*UnsealDek(payload, *key), sealed.dek);
  }
  auto stale = DeriveEcryptfsKeyV2("not-the-key", tima);
  EXPECT_EQ(RewrapEdk(payload, *stale, *key, rng).error(), UnsealError::kHmacMismatch);
}

TEST(EcryptfsKeyTest, FromCharsValidates) {
  EXPECT_TRUE(EcryptfsKey::FromChars(std::string(32, 'a')).has_value());
  EXPECT_FALSE(EcryptfsKey::FromChars(std::string(31, 'a')).has_value());
  std::string nonprintable(32, 'a');
  nonprintable[5] = '\n';
  EXPECT_FALSE(EcryptfsKey::FromChars(nonprintable).has_value());
}

TEST(VolumeTest, Paths) {
  EXPECT_EQ(VolumeFor(1, VolumeKind::kData).mount_point, "/data/data1");
  EXPECT_EQ(VolumeFor(1, VolumeKind::kData).backing, "/data/.container_1");
  EXPECT_NE(VolumeFor(1, VolumeKind::kSdcard).mount_point,
            VolumeFor(1, VolumeKind::kData).mount_point);
}

}  // namespace
}  // namespace knoxsim

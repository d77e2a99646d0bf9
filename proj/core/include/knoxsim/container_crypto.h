// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Container encryption: password hashing, eCryptFS key derivation, DEK
// sealing and the encrypted volumes.

#ifndef KNOXSIM_CONTAINER_CRYPTO_H_
#define KNOXSIM_CONTAINER_CRYPTO_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/bytes.h"
#include "knoxsim/common.h"
#include "knoxsim/crypto.h"
#include "knoxsim/result.h"
#include "knoxsim/rng.h"

namespace knoxsim {

struct DeviceState;

// Iterated salted SHA-1, 1024 rounds. 40 hex chars.
std::string HashPasswordCurrent(std::string_view password,
                                std::string_view salt);
// hex(SHA1(pw||salt)) || hex(MD5(pw||salt)). 72 hex chars.
std::string HashPasswordLegacy(std::string_view password,
                               std::string_view salt);

inline constexpr size_t kCurrentHashLength = 40;
inline constexpr size_t kLegacyHashLength = 72;

inline constexpr char kPasswordHashPath[] =
    "/data/system/container/containerpassword_1.key";
// World-readable settings entry holding the password salt.
inline constexpr char kPasswordSaltPath[] =
    "/data/system/settings/lockscreen.password_salt_1";
inline constexpr char kEdkPath[] = "/data/system/edk_p_container_1";

struct PasswordRecord {
  std::string stored_hash;
  std::string salt;
};

enum class PasswordError { kMalformedRecord };

Result<bool, PasswordError> VerifyPassword(const PasswordRecord& record,
                                           std::string_view password);

// Standard alphabet, '=' padded.
std::string Base64Encode(ByteView data);

inline constexpr size_t kEcryptfsKeyLength = 32;
inline constexpr size_t kMinPasswordLength = 7;
inline constexpr size_t kMaxV1PasswordLength = 32;
inline constexpr uint32_t kV2Iterations = 10000;

class EcryptfsKey {
 public:
  // nullopt unless exactly 32 printable ASCII characters.
  static std::optional<EcryptfsKey> FromChars(std::string chars);

  const std::string& chars() const { return chars_; }
  ByteView bytes() const {
    return ByteView(reinterpret_cast<const uint8_t*>(chars_.data()),
                    chars_.size());
  }

  bool operator==(const EcryptfsKey&) const = default;

 private:
  explicit EcryptfsKey(std::string chars) : chars_(std::move(chars)) {}
  std::string chars_;
};

enum class DeriveError { kPasswordTooShort, kPasswordTooLong };

std::string_view Name(DeriveError error);

// The shipped 1.0 scheme: space-pad left to 32, XOR with the TIMA key,
// base64, keep 32 characters.
Result<EcryptfsKey, DeriveError> DeriveEcryptfsKeyV1(std::string_view password,
                                                     const Key256& tima_key);
// PBKDF2-HMAC-SHA256(password, tima_key, 10000) to 24 bytes, base64.
Result<EcryptfsKey, DeriveError> DeriveEcryptfsKeyV2(std::string_view password,
                                                     const Key256& tima_key);
Result<EcryptfsKey, DeriveError> DeriveEcryptfsKey(KnoxVersion version,
                                                   std::string_view password,
                                                   const Key256& tima_key);

inline constexpr char kEdkMagic[] = "EDK1";
inline constexpr size_t kEdkSaltSize = 16;
inline constexpr size_t kEdkPayloadSize = 4 + 16 + 16 + 32 + 32;
inline constexpr uint32_t kMasterKeyIterations = 4096;

struct EdkPayload {
  std::array<uint8_t, kEdkSaltSize> salt{};
  std::array<uint8_t, crypto::kAesBlockSize> iv{};
  std::array<uint8_t, 32> ciphertext{};
  crypto::Digest256 hmac{};

  // "EDK1" || salt || IV || ciphertext || HMAC.
  Bytes Serialize() const;
  static std::optional<EdkPayload> Parse(ByteView wire);
  // salt || IV || ciphertext, the HMAC input.
  Bytes AuthenticatedPortion() const;

  bool operator==(const EdkPayload&) const = default;
};

// MK = PBKDF2(ecryptfs key, salt, 4096) to 48 bytes: 32-byte cipher key then
// a 16-byte MAC key.
struct MasterKey {
  Key256 cipher_key;
  std::array<uint8_t, 16> mac_key;
};

MasterKey DeriveMasterKey(const EcryptfsKey& key, ByteView salt);

struct SealedDek {
  EdkPayload payload;
  Key256 dek;
};

SealedDek SealDek(const EcryptfsKey& key, DeterministicRng& rng);
// Wraps a given DEK; used by rewrap.
EdkPayload WrapDek(const EcryptfsKey& key, const Key256& dek,
                   DeterministicRng& rng);

enum class UnsealError { kHmacMismatch };

std::string_view Name(UnsealError error);

// Verifies the HMAC before deriving the cipher half of the MK.
Result<Key256, UnsealError> UnsealDek(const EdkPayload& payload,
                                      const EcryptfsKey& key);

Result<EdkPayload, UnsealError> RewrapEdk(const EdkPayload& payload,
                                          const EcryptfsKey& old_key,
                                          const EcryptfsKey& new_key,
                                          DeterministicRng& rng);

enum class VolumeKind { kData, kSdcard };

inline constexpr VolumeKind kAllVolumes[] = {VolumeKind::kData,
                                             VolumeKind::kSdcard};

std::string_view Name(VolumeKind kind);

struct ContainerVolume {
  int container_id;
  VolumeKind kind;
  // Where ciphertext lives, e.g. /data/.container_1.
  std::string backing;
  // Where plaintext appears while mounted, e.g. /data/data1.
  std::string mount_point;
};

ContainerVolume VolumeFor(int container_id, VolumeKind kind);

struct MountEntry {
  int container_id;
  VolumeKind kind;
  Key256 dek;
};

enum class MountError { kNotBooted, kAlreadyMounted, kNotMounted };

std::string_view Name(MountError error);

// Mounts both volumes. Records the DEK as held by vold.
Status<MountError> MountContainer(DeviceState& device, int container_id,
                                  const Key256& dek);
Status<MountError> UnmountContainer(DeviceState& device, int container_id);
bool IsMounted(const DeviceState& device, int container_id);

enum class FileError { kNotMounted, kNoSuchFile, kCorruptCiphertext };

std::string_view Name(FileError error);

Status<FileError> FileWrite(DeviceState& device, int container_id,
                            VolumeKind kind, const std::string& name,
                            std::string_view plaintext);
Result<std::string, FileError> FileRead(const DeviceState& device,
                                        int container_id, VolumeKind kind,
                                        const std::string& name);
// Plaintext read by mount-point path, e.g. /data/data1/notes.txt.
Result<std::string, FileError> ReadMountPath(const DeviceState& device,
                                             std::string_view path);
std::string BackingPath(int container_id, VolumeKind kind,
                        const std::string& name);

}  // namespace knoxsim

#endif  // KNOXSIM_CONTAINER_CRYPTO_H_

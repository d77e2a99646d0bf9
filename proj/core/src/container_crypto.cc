// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/container_crypto.h"

#include <algorithm>
#include <cstring>

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

constexpr char kBase64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

Bytes FileMacKey(const Key256& dek) {
  auto tag = crypto::HmacSha256(dek, ToBytes("knoxsim file mac"));
  return Bytes(tag.begin(), tag.end());
}

const MountEntry* FindMount(const DeviceState& device, int container_id,
                            VolumeKind kind) {
  auto it = device.mounts.find(VolumeFor(container_id, kind).mount_point);
  if (it == device.mounts.end()) return nullptr;
  return &it->second;
}

}  // namespace

std::string_view Name(DeriveError error) {
  return error == DeriveError::kPasswordTooShort ? "PasswordTooShort"
                                                 : "PasswordTooLong";
}

std::string_view Name(UnsealError) { return "HmacMismatch"; }

std::string_view Name(VolumeKind kind) {
  return kind == VolumeKind::kData ? "data" : "sdcard";
}

std::string_view Name(MountError error) {
  switch (error) {
    case MountError::kNotBooted:
      return "NotBooted";
    case MountError::kAlreadyMounted:
      return "AlreadyMounted";
    case MountError::kNotMounted:
      return "NotMounted";
  }
  return "?";
}

std::string_view Name(FileError error) {
  switch (error) {
    case FileError::kNotMounted:
      return "NotMounted";
    case FileError::kNoSuchFile:
      return "NoSuchFile";
    case FileError::kCorruptCiphertext:
      return "CorruptCiphertext";
  }
  return "?";
}

std::string Base64Encode(ByteView data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    uint32_t v = (uint32_t{data[i]} << 16) | (uint32_t{data[i + 1]} << 8) | data[i + 2];
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(kBase64Alphabet[(v >> 6) & 63]);
    out.push_back(kBase64Alphabet[v & 63]);
  }
  const size_t rest = data.size() - i;
  if (rest > 0) {
    uint32_t v = uint32_t{data[i]} << 16;
    if (rest == 2) v |= uint32_t{data[i + 1]} << 8;
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(rest == 2 ? kBase64Alphabet[(v >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

std::optional<EcryptfsKey> EcryptfsKey::FromChars(std::string chars) {
  if (chars.size() != kEcryptfsKeyLength) return std::nullopt;
  for (char c : chars) {
    if (c < 0x20 || c > 0x7e) return std::nullopt;
  }
  return EcryptfsKey(std::move(chars));
}

Result<EcryptfsKey, DeriveError> DeriveEcryptfsKeyV1(std::string_view password,
                                                     const Key256& tima_key) {
  if (password.size() < kMinPasswordLength) return Fail(DeriveError::kPasswordTooShort);
  if (password.size() > kMaxV1PasswordLength) return Fail(DeriveError::kPasswordTooLong);
  std::array<uint8_t, 32> bytes;
  std::fill(bytes.begin(), bytes.end(), ' ');
  std::memcpy(bytes.data() + (32 - password.size()), password.data(), password.size());
  std::array<uint8_t, 32> key_bytes;
  for (size_t i = 0; i < 32; ++i) key_bytes[i] = bytes[i] ^ tima_key[i];
  return *EcryptfsKey::FromChars(Base64Encode(key_bytes).substr(0, kEcryptfsKeyLength));
}

Result<EcryptfsKey, DeriveError> DeriveEcryptfsKeyV2(std::string_view password,
                                                     const Key256& tima_key) {
  if (password.size() < kMinPasswordLength) return Fail(DeriveError::kPasswordTooShort);
  Bytes raw = crypto::Pbkdf2HmacSha256(ToBytes(password), tima_key, kV2Iterations, 24);
  return *EcryptfsKey::FromChars(Base64Encode(raw));
}

Result<EcryptfsKey, DeriveError> DeriveEcryptfsKey(KnoxVersion version,
                                                   std::string_view password,
                                                   const Key256& tima_key) {
  return version == KnoxVersion::kV1_0 ? DeriveEcryptfsKeyV1(password, tima_key)
                                       : DeriveEcryptfsKeyV2(password, tima_key);
}

Bytes EdkPayload::Serialize() const {
  Bytes out = ToBytes(kEdkMagic);
  Append(out, salt);
  Append(out, iv);
  Append(out, ciphertext);
  Append(out, hmac);
  return out;
}

std::optional<EdkPayload> EdkPayload::Parse(ByteView wire) {
  if (wire.size() != kEdkPayloadSize) return std::nullopt;
  if (!std::equal(wire.begin(), wire.begin() + 4, kEdkMagic)) return std::nullopt;
  EdkPayload p;
  auto at = wire.begin() + 4;
  std::copy_n(at, p.salt.size(), p.salt.begin());
  at += p.salt.size();
  std::copy_n(at, p.iv.size(), p.iv.begin());
  at += p.iv.size();
  std::copy_n(at, p.ciphertext.size(), p.ciphertext.begin());
  at += p.ciphertext.size();
  std::copy_n(at, p.hmac.size(), p.hmac.begin());
  return p;
}

Bytes EdkPayload::AuthenticatedPortion() const {
  Bytes out(salt.begin(), salt.end());
  Append(out, iv);
  Append(out, ciphertext);
  return out;
}

MasterKey DeriveMasterKey(const EcryptfsKey& key, ByteView salt) {
  Bytes mk = crypto::Pbkdf2HmacSha256(key.bytes(), salt, kMasterKeyIterations, 48);
  MasterKey out;
  std::copy_n(mk.begin(), 32, out.cipher_key.begin());
  std::copy_n(mk.begin() + 32, 16, out.mac_key.begin());
  return out;
}

EdkPayload WrapDek(const EcryptfsKey& key, const Key256& dek,
                   DeterministicRng& rng) {
  EdkPayload p;
  p.salt = rng.NextArray<kEdkSaltSize>();
  p.iv = rng.NextArray<crypto::kAesBlockSize>();
  MasterKey mk = DeriveMasterKey(key, p.salt);
  Bytes ct = crypto::Aes256CbcEncrypt(mk.cipher_key, p.iv, dek);
  std::copy(ct.begin(), ct.end(), p.ciphertext.begin());
  p.hmac = crypto::HmacSha256(mk.mac_key, p.AuthenticatedPortion());
  return p;
}

SealedDek SealDek(const EcryptfsKey& key, DeterministicRng& rng) {
  Key256 dek = rng.NextArray<32>();
  return SealedDek{WrapDek(key, dek, rng), dek};
}

Result<Key256, UnsealError> UnsealDek(const EdkPayload& payload,
                                      const EcryptfsKey& key) {
  // MK bytes 32..47 are the head of PBKDF2 block 2.
  crypto::Digest256 block2 =
      crypto::Pbkdf2HmacSha256Block(key.bytes(), payload.salt, kMasterKeyIterations, 2);
  auto tag = crypto::HmacSha256(ByteView(block2.data(), 16), payload.AuthenticatedPortion());
  if (!crypto::ConstantTimeEqual(tag, payload.hmac)) return Fail(UnsealError::kHmacMismatch);
  Key256 cipher_key =
      crypto::Pbkdf2HmacSha256Block(key.bytes(), payload.salt, kMasterKeyIterations, 1);
  auto plain = crypto::Aes256CbcDecrypt(cipher_key, payload.iv, payload.ciphertext);
  Key256 dek;
  std::copy(plain->begin(), plain->end(), dek.begin());
  return dek;
}

Result<EdkPayload, UnsealError> RewrapEdk(const EdkPayload& payload,
                                          const EcryptfsKey& old_key,
                                          const EcryptfsKey& new_key,
                                          DeterministicRng& rng) {
  auto dek = UnsealDek(payload, old_key);
  if (!dek) return Fail(dek.error());
  return WrapDek(new_key, *dek, rng);
}

ContainerVolume VolumeFor(int container_id, VolumeKind kind) {
  const std::string id = std::to_string(container_id);
  if (kind == VolumeKind::kData) {
    return {container_id, kind, "/data/.container_" + id, "/data/data" + id};
  }
  return {container_id, kind, "/storage/container/.sdcontainer_" + id,
          "/mnt_" + id + "/sdcard_" + id};
}

std::string BackingPath(int container_id, VolumeKind kind,
                        const std::string& name) {
  return VolumeFor(container_id, kind).backing + "/" + name;
}

bool IsMounted(const DeviceState& device, int container_id) {
  for (const auto& [_, entry] : device.mounts) {
    if (entry.container_id == container_id) return true;
  }
  return false;
}

Status<MountError> MountContainer(DeviceState& device, int container_id,
                                  const Key256& dek) {
  if (device.power != PowerState::kBooted) return Fail(MountError::kNotBooted);
  if (IsMounted(device, container_id)) return Fail(MountError::kAlreadyMounted);
  for (VolumeKind kind : kAllVolumes) {
    device.mounts[VolumeFor(container_id, kind).mount_point] =
        MountEntry{container_id, kind, dek};
  }
  device.exposure.Record(SecretKind::kDek, "vold", device.tick,
                         Bytes(dek.begin(), dek.end()));
  Log(device, "mount container " + std::to_string(container_id));
  return Ok();
}

Status<MountError> UnmountContainer(DeviceState& device, int container_id) {
  if (!IsMounted(device, container_id)) return Fail(MountError::kNotMounted);
  std::erase_if(device.mounts, [&](const auto& kv) {
    return kv.second.container_id == container_id;
  });
  Log(device, "unmount container " + std::to_string(container_id));
  return Ok();
}

Status<FileError> FileWrite(DeviceState& device, int container_id,
                            VolumeKind kind, const std::string& name,
                            std::string_view plaintext) {
  const MountEntry* mount = FindMount(device, container_id, kind);
  if (!mount) return Fail(FileError::kNotMounted);
  Bytes iv = device.rng.NextBytes(crypto::kAesBlockSize);
  Bytes box = crypto::BoxSeal(mount->dek, FileMacKey(mount->dek), iv,
                              ToBytes(plaintext), ToBytes(name));
  device.fs.Write(BackingPath(container_id, kind, name), std::move(box),
                  FileAccess::kSystem);
  return Ok();
}

Result<std::string, FileError> FileRead(const DeviceState& device,
                                        int container_id, VolumeKind kind,
                                        const std::string& name) {
  const MountEntry* mount = FindMount(device, container_id, kind);
  if (!mount) return Fail(FileError::kNotMounted);
  auto box = device.fs.Read(BackingPath(container_id, kind, name), UidClass::kRoot);
  if (!box) return Fail(FileError::kNoSuchFile);
  auto plain = crypto::BoxOpen(mount->dek, FileMacKey(mount->dek), *box, ToBytes(name));
  if (!plain) return Fail(FileError::kCorruptCiphertext);
  return ToString(*plain);
}

Result<std::string, FileError> ReadMountPath(const DeviceState& device,
                                             std::string_view path) {
  for (const auto& [mount_point, entry] : device.mounts) {
    if (path.size() > mount_point.size() + 1 && path.starts_with(mount_point) &&
        path[mount_point.size()] == '/') {
      return FileRead(device, entry.container_id, entry.kind,
                      std::string(path.substr(mount_point.size() + 1)));
    }
  }
  return Fail(FileError::kNotMounted);
}

}  // namespace knoxsim

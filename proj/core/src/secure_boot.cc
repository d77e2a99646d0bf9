// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/secure_boot.h"

#include <string>

#include "knoxsim/device.h"
#include "knoxsim/trust_world.h"

namespace knoxsim {
namespace {

Key256 SeedFromLabel(std::string_view label) {
  return crypto::Sha256(ToBytes(label));
}

// Deterministic filler: SHA-256 in counter mode over a label.
Bytes Expand(std::string_view label, size_t size) {
  Bytes out;
  for (uint32_t counter = 0; out.size() < size; ++counter) {
    Bytes input = ToBytes(label);
    input.push_back(static_cast<uint8_t>(counter));
    auto block = crypto::Sha256(input);
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(size);
  return out;
}

BootComponent SignedComponent(BootComponentId id, Bytes content) {
  BootComponent component{id, std::move(content), {}};
  component.signature = VendorSigningKey().Sign(component.Hash());
  return component;
}

Bytes StockContent(std::string_view model, BootComponentId id) {
  std::string label = "firmware/" + std::string(model) + "/" + std::string(Name(id));
  Bytes content = ToBytes(label + "\n");
  Append(content, Expand(label, 256));
  return content;
}

std::map<int, Bytes> StockBlocks(std::string_view model, int block_count) {
  std::map<int, Bytes> blocks;
  for (int i = 0; i < block_count; ++i) {
    blocks[i] = Expand("system/" + std::string(model) + "/" + std::to_string(i), 64);
  }
  return blocks;
}

}  // namespace

std::string_view Name(TrustletHost host) {
  return host == TrustletHost::kMobiCore ? "MobiCore" : "QSEE";
}

std::string_view Name(BootComponentId id) {
  switch (id) {
    case BootComponentId::kSecondaryBootloader:
      return "SecondaryBootloader";
    case BootComponentId::kSecureWorldOs:
      return "SecureWorldOS";
    case BootComponentId::kKernel:
      return "Kernel";
  }
  return "?";
}

std::string_view Name(ProfileError error) {
  switch (error) {
    case ProfileError::kVersionInvariant:
      return "VersionInvariant";
    case ProfileError::kFirmwareHashMismatch:
      return "FirmwareHashMismatch";
    case ProfileError::kAttestationKeyMismatch:
      return "AttestationKeyMismatch";
    case ProfileError::kBadBlockSet:
      return "BadBlockSet";
  }
  return "?";
}

std::string_view Name(PowerState state) {
  switch (state) {
    case PowerState::kOff:
      return "Off";
    case PowerState::kBooted:
      return "Booted";
    case PowerState::kBootLoop:
      return "BootLoop";
    case PowerState::kRebooting:
      return "Rebooting";
  }
  return "?";
}

std::string_view Name(BootOutcome outcome) {
  return outcome == BootOutcome::kBooted ? "Booted" : "BootLoop";
}

std::string_view Name(BootError error) {
  switch (error) {
    case BootError::kNotPoweredOff:
      return "NotPoweredOff";
    case BootError::kNotBooted:
      return "NotBooted";
    case BootError::kNoSuchBlock:
      return "NoSuchBlock";
    case BootError::kCorruptBlock:
      return "CorruptBlock";
  }
  return "?";
}

const crypto::SigningKey& VendorSigningKey() {
  static const crypto::SigningKey key =
      crypto::SigningKey::FromSeed(SeedFromLabel("knoxsim vendor release key"));
  return key;
}

bool FirmwareImage::VendorSigned(BootComponentId id) const {
  const BootComponent& c = components[static_cast<size_t>(id)];
  return c.id == id && crypto::VerifySignature(VendorSigningKey().public_key(),
                                               c.Hash(), c.signature);
}

bool FirmwareImage::FullyVendorSigned() const {
  for (const auto& c : components) {
    if (!VendorSigned(c.id)) return false;
  }
  return true;
}

FirmwareImage MakeVendorFirmware(std::string_view model, int block_count) {
  FirmwareImage image;
  for (size_t i = 0; i < kBootComponentCount; ++i) {
    auto id = static_cast<BootComponentId>(i);
    image.components[i] = SignedComponent(id, StockContent(model, id));
  }
  image.system_blocks = StockBlocks(model, block_count);
  return image;
}

FirmwareImage MakeRootedFirmware(std::string_view model, int block_count) {
  FirmwareImage image = MakeVendorFirmware(model, block_count);
  // Patching the kernel keeps the old signature, which no longer matches.
  Append(image.components[static_cast<size_t>(BootComponentId::kKernel)].content,
         ToBytes("\npatch: selinux=permissive setuid-any\n"));
  Bytes su = ToBytes("/system/xbin/su");
  su.resize(64, 0);
  image.system_blocks[0] = su;
  return image;
}

void FillDerivedProfileFields(DeviceProfile& profile) {
  FirmwareImage image =
      MakeVendorFirmware(profile.model, profile.system_block_count);
  for (size_t i = 0; i < kBootComponentCount; ++i) {
    profile.firmware_hashes[i] = image.components[i].Hash();
  }
  profile.attestation_public_key =
      AttestationKeyFor(profile.device_id).public_key();
}

Status<ProfileError> ValidateProfile(const DeviceProfile& profile) {
  const bool v1 = profile.knox_version == KnoxVersion::kV1_0;
  const bool adb_ok = profile.adb_enabled == v1;
  const bool certs_ok = profile.separate_cert_store == !v1;
  const bool keyboard_ok = profile.separate_keyboard == !v1;
  if (!adb_ok || !certs_ok || !keyboard_ok) {
    return Fail(ProfileError::kVersionInvariant);
  }
  if (profile.system_block_count <= 0) return Fail(ProfileError::kBadBlockSet);
  for (int block : profile.critical_blocks) {
    if (block < 0 || block >= profile.system_block_count) {
      return Fail(ProfileError::kBadBlockSet);
    }
  }
  DeviceProfile expected = profile;
  FillDerivedProfileFields(expected);
  if (expected.firmware_hashes != profile.firmware_hashes) {
    return Fail(ProfileError::kFirmwareHashMismatch);
  }
  if (expected.attestation_public_key != profile.attestation_public_key) {
    return Fail(ProfileError::kAttestationKeyMismatch);
  }
  return Ok();
}

void BlockStore::Provision(const std::map<int, Bytes>& blocks,
                           std::set<int> critical) {
  golden_.clear();
  for (const auto& [id, data] : blocks) golden_[id] = crypto::Sha256(data);
  critical_ = std::move(critical);
  Load(blocks);
}

void BlockStore::Load(const std::map<int, Bytes>& blocks) {
  blocks_ = blocks;
  corrupt_.clear();
}

void BlockStore::Tamper(int id, Bytes data) { blocks_[id] = std::move(data); }

bool BlockStore::MatchesGolden(int id) const {
  auto block = blocks_.find(id);
  auto golden = golden_.find(id);
  if (block == blocks_.end() || golden == golden_.end()) return false;
  return crypto::Sha256(block->second) == golden->second;
}

Status<BootError> FlashFirmware(DeviceState& device, FirmwareImage image) {
  if (device.power != PowerState::kOff) return Fail(BootError::kNotPoweredOff);
  const bool signed_image = image.FullyVendorSigned();
  device.block_store.Load(image.system_blocks);
  device.firmware = std::move(image);
  if (!signed_image) device.efuse.Blow();
  Log(device, std::string("flash_firmware vendor_signed=") +
                  (signed_image ? "true" : "false"));
  return Ok();
}

Result<BootOutcome, BootError> BootDevice(DeviceState& device) {
  if (device.power != PowerState::kOff &&
      device.power != PowerState::kRebooting) {
    return Fail(BootError::kNotPoweredOff);
  }
  device.measurement_log.Clear();
  for (const BootComponent& component : device.firmware.components) {
    device.measurement_log.entries.push_back({component.id, component.Hash()});
    if (!device.firmware.VendorSigned(component.id)) {
      device.measurement_log.verify_failures.push_back(component.id);
      device.efuse.Blow();
    }
  }
  if (device.profile.dm_verity_enabled) {
    for (int block : device.block_store.critical()) {
      if (!device.block_store.MatchesGolden(block)) {
        device.block_store.MarkCorrupt(block);
        device.measurement_log.Clear();
        device.power = PowerState::kBootLoop;
        Log(device, "boot BootLoop critical_block=" + std::to_string(block));
        return BootOutcome::kBootLoop;
      }
    }
  }
  device.power = PowerState::kBooted;
  Log(device, "boot Booted failures=" +
                  std::to_string(device.measurement_log.verify_failures.size()));
  InitializeRuntime(device);
  return BootOutcome::kBooted;
}

Result<Bytes, BootError> DmVerityRead(DeviceState& device, int block_id) {
  if (device.power != PowerState::kBooted) return Fail(BootError::kNotBooted);
  if (!device.block_store.Contains(block_id)) return Fail(BootError::kNoSuchBlock);
  if (!device.profile.dm_verity_enabled) return device.block_store.raw(block_id);
  if (device.block_store.corrupt().contains(block_id)) {
    return Fail(BootError::kCorruptBlock);
  }
  if (!device.block_store.MatchesGolden(block_id)) {
    device.block_store.MarkCorrupt(block_id);
    return Fail(BootError::kCorruptBlock);
  }
  return device.block_store.raw(block_id);
}

void PowerOff(DeviceState& device) {
  if (device.power == PowerState::kOff) return;
  TeardownRuntime(device);
  device.measurement_log.Clear();
  device.power = PowerState::kOff;
  Log(device, "power_off");
}

BootOutcome Reboot(DeviceState& device) {
  TeardownRuntime(device);
  device.measurement_log.Clear();
  device.power = PowerState::kRebooting;
  Log(device, "reboot");
  return *BootDevice(device);
}

}  // namespace knoxsim

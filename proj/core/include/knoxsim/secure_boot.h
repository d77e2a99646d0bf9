// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Boot chain, warranty-bit eFuse, dm-verity block store and device profile.

#ifndef KNOXSIM_SECURE_BOOT_H_
#define KNOXSIM_SECURE_BOOT_H_

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/bytes.h"
#include "knoxsim/common.h"
#include "knoxsim/crypto.h"
#include "knoxsim/result.h"

namespace knoxsim {

struct DeviceState;

enum class TrustletHost { kMobiCore, kQsee };

std::string_view Name(TrustletHost host);

// IT-admin controls over container app installs (2.3 only).
struct InstallPolicy {
  bool whitelist_enabled = false;
  std::set<std::string> whitelist;
  std::set<std::string> blacklist;

  bool operator==(const InstallPolicy&) const = default;
};

enum class BootComponentId : uint8_t {
  kSecondaryBootloader = 0,
  kSecureWorldOs = 1,
  kKernel = 2,
};

inline constexpr size_t kBootComponentCount = 3;

std::string_view Name(BootComponentId id);

struct DeviceProfile {
  std::string id;
  std::string model;
  KnoxVersion knox_version = KnoxVersion::kV1_0;
  bool rkp_enabled = false;
  bool dm_verity_enabled = false;
  bool adb_enabled = true;
  bool separate_cert_store = false;
  bool separate_keyboard = false;
  bool clipboard_sharing_policy = false;
  TrustletHost keystore_host = TrustletHost::kMobiCore;
  TrustletHost secure_storage_host = TrustletHost::kMobiCore;
  // IMEI or Wi-Fi MAC.
  std::string device_id;

  // Hardening switches beyond the shipped 1.0/2.3 behavior.
  bool tima_key_in_tz = false;
  bool unmount_on_lock = false;
  // Scheduler ticks the 2.3 clipboard selector stays redirected after a
  // user-side activity launch. 0 closes the race.
  int race_window_ticks = 0;
  InstallPolicy install_policy;

  int system_block_count = 8;
  std::set<int> critical_blocks;
  // SHA-256 of each vendor firmware component, in boot order.
  std::array<crypto::Digest256, kBootComponentCount> firmware_hashes{};
  Bytes attestation_public_key;

  bool operator==(const DeviceProfile&) const = default;
};

enum class ProfileError {
  kVersionInvariant,
  kFirmwareHashMismatch,
  kAttestationKeyMismatch,
  kBadBlockSet,
};

std::string_view Name(ProfileError error);

// Checks the version invariants and that the recorded hashes and public key
// match what this build derives for the model and device id.
Status<ProfileError> ValidateProfile(const DeviceProfile& profile);

// Fills firmware_hashes and attestation_public_key from model and device_id.
void FillDerivedProfileFields(DeviceProfile& profile);

struct BootComponent {
  BootComponentId id;
  Bytes content;
  Bytes signature;

  crypto::Digest256 Hash() const { return crypto::Sha256(content); }
};

struct FirmwareImage {
  std::array<BootComponent, kBootComponentCount> components;
  std::map<int, Bytes> system_blocks;

  bool VendorSigned(BootComponentId id) const;
  bool FullyVendorSigned() const;
};

const crypto::SigningKey& VendorSigningKey();

// The stock image for a model, signed with the vendor key.
FirmwareImage MakeVendorFirmware(std::string_view model, int block_count);

// A rooted custom image: the kernel is patched (breaking its vendor
// signature) and system block 0 carries an su binary.
FirmwareImage MakeRootedFirmware(std::string_view model, int block_count);

// One-way warranty bit.
class EFuse {
 public:
  bool warranty_bit() const { return warranty_bit_; }
  void Blow() { warranty_bit_ = true; }

 private:
  bool warranty_bit_ = false;
};

struct MeasurementEntry {
  BootComponentId id;
  crypto::Digest256 hash;

  bool operator==(const MeasurementEntry&) const = default;
};

// Lives in secure-world memory; only trust_world operations read it.
struct MeasurementLog {
  std::vector<MeasurementEntry> entries;
  std::vector<BootComponentId> verify_failures;

  void Clear() {
    entries.clear();
    verify_failures.clear();
  }
};

class BlockStore {
 public:
  // Records golden hashes. Called once, at provisioning.
  void Provision(const std::map<int, Bytes>& blocks, std::set<int> critical);

  // Replaces block contents, e.g. after a flash. Golden hashes stay.
  void Load(const std::map<int, Bytes>& blocks);

  // Raw write by a privileged attacker, bypassing verification.
  void Tamper(int id, Bytes data);

  bool Contains(int id) const { return blocks_.contains(id); }
  bool MatchesGolden(int id) const;
  const Bytes& raw(int id) const { return blocks_.at(id); }
  const std::set<int>& corrupt() const { return corrupt_; }
  const std::set<int>& critical() const { return critical_; }
  void MarkCorrupt(int id) { corrupt_.insert(id); }
  void ClearCorrupt() { corrupt_.clear(); }

 private:
  std::map<int, Bytes> blocks_;
  std::map<int, crypto::Digest256> golden_;
  std::set<int> corrupt_;
  std::set<int> critical_;
};

enum class PowerState { kOff, kBooted, kBootLoop, kRebooting };
enum class BootOutcome { kBooted, kBootLoop };

std::string_view Name(PowerState state);
std::string_view Name(BootOutcome outcome);

enum class BootError { kNotPoweredOff, kNotBooted, kNoSuchBlock, kCorruptBlock };

std::string_view Name(BootError error);

Status<BootError> FlashFirmware(DeviceState& device, FirmwareImage image);

// Measures and verifies every component, then brings up the normal world.
Result<BootOutcome, BootError> BootDevice(DeviceState& device);

Result<Bytes, BootError> DmVerityRead(DeviceState& device, int block_id);

// Ends every volatile thing: mounts, memory-resident secrets, processes.
void PowerOff(DeviceState& device);

// Power cycle through the Rebooting state.
BootOutcome Reboot(DeviceState& device);

}  // namespace knoxsim

#endif  // KNOXSIM_SECURE_BOOT_H_

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Secure-world side: SMC gateway, TIMA keystore, SecureStorage, RKP, PKM and
// attestation.

#ifndef KNOXSIM_TRUST_WORLD_H_
#define KNOXSIM_TRUST_WORLD_H_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "knoxsim/bytes.h"
#include "knoxsim/common.h"
#include "knoxsim/crypto.h"
#include "knoxsim/result.h"
#include "knoxsim/secure_boot.h"

namespace knoxsim {

struct DeviceState;

enum class TrustletId : int { kTimaKeystore = 1, kSecureStorage = 2 };

enum class KernelOpKind {
  kModifyPageTable,
  kWriteKernelCodePage,
  kMapKernelDataExecutable,
  kDoubleMapKernelPage,
  kExecuteUserPageFromKernel,
  kModifyCredStruct,
};

inline constexpr KernelOpKind kAllKernelOps[] = {
    KernelOpKind::kModifyPageTable,         KernelOpKind::kWriteKernelCodePage,
    KernelOpKind::kMapKernelDataExecutable, KernelOpKind::kDoubleMapKernelPage,
    KernelOpKind::kExecuteUserPageFromKernel, KernelOpKind::kModifyCredStruct,
};

enum class World { kNormal, kSecure };

struct KernelOp {
  KernelOpKind kind;
  World origin = World::kNormal;
};

std::string_view Name(KernelOpKind kind);

// Normal-world kernel as seen by RKP and PKM.
struct KernelState {
  Bytes code;
  bool selinux_enforcing = true;
  bool cred_tampered = false;
  bool page_tables_tampered = false;
  bool data_executable = false;
  bool double_mapped = false;
  bool pxn_bypassed = false;

  bool Tampered() const;
};

struct SecureWorldState {
  // TIMA keystore.
  std::map<int, Key256> installed_keys;
  // Keys minted inside the keystore that never leave it.
  std::set<int> tz_generated;
  // Survives reboots: anomalies are logged, not forgotten.
  std::vector<std::string> anomaly_log;
  // PKM baseline captured at boot.
  crypto::Digest256 boot_kernel_hash{};
  bool boot_selinux_enforcing = true;
};

enum class TrustError {
  kNotBooted,
  kUnknownTrustlet,
  kWarrantyBitSet,
  kDenied,
  kNotFound,
  kCallerRejected,
  kHookDetected,
  kMalformedBlob,
  kNotExportable,
  kWeakPassword,
};

std::string_view Name(TrustError error);

// SMC request payloads.
struct KeystoreInstall {
  int container_id;
  Key256 key;
};
struct KeystoreRetrieve {
  int container_id;
};
// Mint a key inside the keystore (hardened variant).
struct KeystoreGenerate {
  int container_id;
};
// Derive the eCryptFS key inside the keystore from a password, so the TIMA
// key never reaches normal-world memory (hardened variant).
struct KeystoreDeriveKey {
  int container_id;
  std::string password;
};
struct SecureStorageEncrypt {
  Bytes plaintext;
};
struct SecureStorageDecrypt {
  Bytes blob;
};

using SmcRequest = std::variant<KeystoreInstall, KeystoreRetrieve,
                                KeystoreGenerate, KeystoreDeriveKey,
                                SecureStorageEncrypt, SecureStorageDecrypt>;

// Install/Generate return an empty payload; Retrieve returns the key;
// DeriveKey returns the 32 key characters; SecureStorage returns bytes.
using SmcResponse = Bytes;

Result<SmcResponse, TrustError> SmcDispatch(DeviceState& device, Pid caller,
                                            int trustlet_id,
                                            const SmcRequest& request);

Status<TrustError> TimaKeystoreInstall(DeviceState& device, Pid caller,
                                       int container_id, const Key256& key);
Result<Key256, TrustError> TimaKeystoreRetrieve(DeviceState& device,
                                                Pid caller, int container_id);
Status<TrustError> TimaKeystoreGenerate(DeviceState& device, Pid caller,
                                        int container_id);
Result<std::string, TrustError> TimaKeystoreDeriveKey(
    DeviceState& device, Pid caller, int container_id,
    std::string_view password);

Result<Bytes, TrustError> SecureStorageEncryptBlob(DeviceState& device,
                                                   Pid caller,
                                                   ByteView plaintext);
Result<Bytes, TrustError> SecureStorageDecryptBlob(DeviceState& device,
                                                   Pid caller, ByteView blob);

enum class RkpVerdict { kAllowed, kBlocked };

RkpVerdict RkpGuard(DeviceState& device, KernelOp op);

enum class PkmResult { kOk, kAnomalyReboot };

PkmResult PkmTick(DeviceState& device);

// Normal-world request to flip SELinux to permissive. Needs a tampered kernel
// or a root that RKP did not stop.
void SetSelinuxEnforcing(DeviceState& device, bool enforcing);

enum class Verdict : uint8_t { kSecure = 0, kCompromised = 1 };

struct AttestationToken {
  Bytes nonce;
  std::vector<MeasurementEntry> measurements;
  bool warranty_bit = false;
  std::string device_id;
  Verdict verdict = Verdict::kSecure;
  Bytes signature;

  // Every field except the signature, in wire order.
  Bytes SignedPortion() const;
  Bytes Serialize() const;
  static std::optional<AttestationToken> Parse(ByteView wire);

  bool operator==(const AttestationToken&) const = default;
};

inline constexpr size_t kNonceSize = 16;

const crypto::SigningKey& AttestationKeyFor(std::string_view device_id);

Verdict ComputeVerdict(bool warranty_bit, bool verify_failures,
                       bool anomalies);

Result<AttestationToken, TrustError> GenerateAttestation(DeviceState& device,
                                                         ByteView nonce);

enum class RejectReason {
  kBadSignature,
  kNonceReplay,
  kMeasurementMismatch,
  kCompromisedVerdict,
};

std::string_view Name(RejectReason reason);

// Relying-party side. Nonces are single use.
class AttestationVerifier {
 public:
  explicit AttestationVerifier(size_t max_remembered = 4096)
      : max_remembered_(max_remembered) {}

  Status<RejectReason> Verify(ByteView token_wire,
                              const std::vector<MeasurementEntry>& golden,
                              ByteView expected_nonce, ByteView device_pubkey);

 private:
  size_t max_remembered_;
  std::set<Bytes> seen_;
  std::deque<Bytes> order_;
};

std::vector<MeasurementEntry> GoldenMeasurements(const DeviceProfile& profile);

}  // namespace knoxsim

#endif  // KNOXSIM_TRUST_WORLD_H_

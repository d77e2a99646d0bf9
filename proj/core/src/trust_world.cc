// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/trust_world.h"

#include <mutex>
#include <string>

#include "knoxsim/container_crypto.h"
#include "knoxsim/device.h"

namespace knoxsim {
namespace {

bool KeystoreCallerAllowed(const Process* caller) {
  return caller && (caller->name == "system_server" ||
                    caller->uid_class == UidClass::kSystem);
}

Key256 SecureStorageKey(const DeviceState& device, std::string_view purpose) {
  Bytes label = ToBytes("knoxsim secure storage/");
  Append(label, ToBytes(purpose));
  Append(label, ToBytes("/"));
  Append(label, ToBytes(device.profile.device_id));
  return crypto::Sha256(label);
}

Status<TrustError> KeystoreGate(DeviceState& device, Pid caller) {
  if (device.power != PowerState::kBooted) return Fail(TrustError::kNotBooted);
  if (device.efuse.warranty_bit()) return Fail(TrustError::kWarrantyBitSet);
  if (!KeystoreCallerAllowed(device.processes.Get(caller))) {
    return Fail(TrustError::kDenied);
  }
  return Ok();
}

std::string CallerName(const DeviceState& device, Pid caller) {
  const Process* p = device.processes.Get(caller);
  return p ? p->name : "pid" + std::to_string(caller.value);
}

void ApplyKernelOp(KernelState& kernel, KernelOpKind kind) {
  switch (kind) {
    case KernelOpKind::kModifyPageTable:
      kernel.page_tables_tampered = true;
      break;
    case KernelOpKind::kWriteKernelCodePage:
      if (!kernel.code.empty()) kernel.code[0] ^= 0xff;
      break;
    case KernelOpKind::kMapKernelDataExecutable:
      kernel.data_executable = true;
      break;
    case KernelOpKind::kDoubleMapKernelPage:
      kernel.double_mapped = true;
      break;
    case KernelOpKind::kExecuteUserPageFromKernel:
      kernel.pxn_bypassed = true;
      break;
    case KernelOpKind::kModifyCredStruct:
      kernel.cred_tampered = true;
      break;
  }
}

void PutU16(Bytes& out, size_t value) {
  out.push_back(static_cast<uint8_t>(value >> 8));
  out.push_back(static_cast<uint8_t>(value));
}

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  bool U8(uint8_t& out) {
    if (pos_ + 1 > data_.size()) return false;
    out = data_[pos_++];
    return true;
  }
  bool U16(size_t& out) {
    if (pos_ + 2 > data_.size()) return false;
    out = (size_t{data_[pos_]} << 8) | data_[pos_ + 1];
    pos_ += 2;
    return true;
  }
  bool Take(size_t n, Bytes& out) {
    if (pos_ + n > data_.size()) return false;
    out.assign(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return true;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  ByteView data_;
  size_t pos_ = 0;
};

}  // namespace

std::string_view Name(KernelOpKind kind) {
  switch (kind) {
    case KernelOpKind::kModifyPageTable:
      return "ModifyPageTable";
    case KernelOpKind::kWriteKernelCodePage:
      return "WriteKernelCodePage";
    case KernelOpKind::kMapKernelDataExecutable:
      return "MapKernelDataExecutable";
    case KernelOpKind::kDoubleMapKernelPage:
      return "DoubleMapKernelPage";
    case KernelOpKind::kExecuteUserPageFromKernel:
      return "ExecuteUserPageFromKernel";
    case KernelOpKind::kModifyCredStruct:
      return "ModifyCredStruct";
  }
  return "?";
}

std::string_view Name(TrustError error) {
  switch (error) {
    case TrustError::kNotBooted:
      return "NotBooted";
    case TrustError::kUnknownTrustlet:
      return "UnknownTrustlet";
    case TrustError::kWarrantyBitSet:
      return "WarrantyBitSet";
    case TrustError::kDenied:
      return "Denied";
    case TrustError::kNotFound:
      return "NotFound";
    case TrustError::kCallerRejected:
      return "CallerRejected";
    case TrustError::kHookDetected:
      return "HookDetected";
    case TrustError::kMalformedBlob:
      return "MalformedBlob";
    case TrustError::kNotExportable:
      return "NotExportable";
    case TrustError::kWeakPassword:
      return "WeakPassword";
  }
  return "?";
}

bool KernelState::Tampered() const {
  return cred_tampered || page_tables_tampered || data_executable ||
         double_mapped || pxn_bypassed;
}

Status<TrustError> TimaKeystoreInstall(DeviceState& device, Pid caller,
                                       int container_id, const Key256& key) {
  if (auto gate = KeystoreGate(device, caller); !gate) return gate;
  device.trust.installed_keys[container_id] = key;
  device.trust.tz_generated.erase(container_id);
  return Ok();
}

Result<Key256, TrustError> TimaKeystoreRetrieve(DeviceState& device,
                                                Pid caller, int container_id) {
  if (auto gate = KeystoreGate(device, caller); !gate) return Fail(gate.error());
  auto it = device.trust.installed_keys.find(container_id);
  if (it == device.trust.installed_keys.end()) return Fail(TrustError::kNotFound);
  if (device.trust.tz_generated.contains(container_id)) {
    return Fail(TrustError::kNotExportable);
  }
  device.exposure.Record(SecretKind::kTimaKey, CallerName(device, caller),
                         device.tick, Bytes(it->second.begin(), it->second.end()));
  return it->second;
}

Status<TrustError> TimaKeystoreGenerate(DeviceState& device, Pid caller,
                                        int container_id) {
  if (auto gate = KeystoreGate(device, caller); !gate) return gate;
  device.trust.installed_keys[container_id] = device.rng.NextArray<32>();
  device.trust.tz_generated.insert(container_id);
  return Ok();
}

Result<std::string, TrustError> TimaKeystoreDeriveKey(
    DeviceState& device, Pid caller, int container_id,
    std::string_view password) {
  if (auto gate = KeystoreGate(device, caller); !gate) return Fail(gate.error());
  auto it = device.trust.installed_keys.find(container_id);
  if (it == device.trust.installed_keys.end()) return Fail(TrustError::kNotFound);
  auto key = DeriveEcryptfsKey(device.profile.knox_version, password, it->second);
  if (!key) return Fail(TrustError::kWeakPassword);
  return key->chars();
}

Result<Bytes, TrustError> SecureStorageEncryptBlob(DeviceState& device,
                                                   Pid caller,
                                                   ByteView plaintext) {
  if (device.power != PowerState::kBooted) return Fail(TrustError::kNotBooted);
  if (!device.processes.Get(caller)) return Fail(TrustError::kDenied);
  Bytes iv = device.rng.NextBytes(crypto::kAesBlockSize);
  return crypto::BoxSeal(SecureStorageKey(device, "enc"),
                         SecureStorageKey(device, "mac"), iv, plaintext, {});
}

Result<Bytes, TrustError> SecureStorageDecryptBlob(DeviceState& device,
                                                   Pid caller, ByteView blob) {
  if (device.power != PowerState::kBooted) return Fail(TrustError::kNotBooted);
  const Process* p = device.processes.Get(caller);
  if (!p || p->name != "vold" || !p->mounting) {
    return Fail(TrustError::kCallerRejected);
  }
  if (p->hooks.contains(Hook::kHookSsRead)) return Fail(TrustError::kHookDetected);
  auto plain = crypto::BoxOpen(SecureStorageKey(device, "enc"),
                               SecureStorageKey(device, "mac"), blob, {});
  if (!plain) return Fail(TrustError::kMalformedBlob);
  return *std::move(plain);
}

Result<SmcResponse, TrustError> SmcDispatch(DeviceState& device, Pid caller,
                                            int trustlet_id,
                                            const SmcRequest& request) {
  if (device.power != PowerState::kBooted) return Fail(TrustError::kNotBooted);
  if (trustlet_id != static_cast<int>(TrustletId::kTimaKeystore) &&
      trustlet_id != static_cast<int>(TrustletId::kSecureStorage)) {
    return Fail(TrustError::kUnknownTrustlet);
  }
  const bool keystore = trustlet_id == static_cast<int>(TrustletId::kTimaKeystore);
  return std::visit(
      [&](const auto& req) -> Result<SmcResponse, TrustError> {
        using T = std::decay_t<decltype(req)>;
        constexpr bool kKeystoreRequest =
            std::is_same_v<T, KeystoreInstall> ||
            std::is_same_v<T, KeystoreRetrieve> ||
            std::is_same_v<T, KeystoreGenerate> ||
            std::is_same_v<T, KeystoreDeriveKey>;
        if (kKeystoreRequest != keystore) return Fail(TrustError::kDenied);
        if constexpr (std::is_same_v<T, KeystoreInstall>) {
          auto r = TimaKeystoreInstall(device, caller, req.container_id, req.key);
          if (!r) return Fail(r.error());
          return Bytes{};
        } else if constexpr (std::is_same_v<T, KeystoreRetrieve>) {
          auto r = TimaKeystoreRetrieve(device, caller, req.container_id);
          if (!r) return Fail(r.error());
          return Bytes(r->begin(), r->end());
        } else if constexpr (std::is_same_v<T, KeystoreGenerate>) {
          auto r = TimaKeystoreGenerate(device, caller, req.container_id);
          if (!r) return Fail(r.error());
          return Bytes{};
        } else if constexpr (std::is_same_v<T, KeystoreDeriveKey>) {
          auto r = TimaKeystoreDeriveKey(device, caller, req.container_id,
                                         req.password);
          if (!r) return Fail(r.error());
          return ToBytes(*r);
        } else if constexpr (std::is_same_v<T, SecureStorageEncrypt>) {
          return SecureStorageEncryptBlob(device, caller, req.plaintext);
        } else {
          return SecureStorageDecryptBlob(device, caller, req.blob);
        }
      },
      request);
}

RkpVerdict RkpGuard(DeviceState& device, KernelOp op) {
  if (op.origin == World::kSecure) return RkpVerdict::kAllowed;
  if (device.profile.rkp_enabled) {
    device.trust.anomaly_log.push_back("rkp blocked " + std::string(Name(op.kind)));
    Log(device, "rkp Blocked " + std::string(Name(op.kind)));
    Reboot(device);
    return RkpVerdict::kBlocked;
  }
  ApplyKernelOp(device.kernel, op.kind);
  Log(device, "rkp Allowed " + std::string(Name(op.kind)));
  return RkpVerdict::kAllowed;
}

PkmResult PkmTick(DeviceState& device) {
  if (device.power != PowerState::kBooted) return PkmResult::kOk;
  const bool code_ok = crypto::Sha256(device.kernel.code) == device.trust.boot_kernel_hash;
  const bool selinux_ok =
      device.kernel.selinux_enforcing == device.trust.boot_selinux_enforcing;
  if (code_ok && selinux_ok) return PkmResult::kOk;
  device.trust.anomaly_log.push_back(!code_ok ? "pkm kernel code hash mismatch"
                                              : "pkm selinux state changed");
  Log(device, "pkm AnomalyReboot");
  Reboot(device);
  return PkmResult::kAnomalyReboot;
}

void SetSelinuxEnforcing(DeviceState& device, bool enforcing) {
  device.kernel.selinux_enforcing = enforcing;
}

Bytes AttestationToken::SignedPortion() const {
  Bytes out;
  out.push_back(static_cast<uint8_t>(nonce.size()));
  Append(out, nonce);
  out.push_back(static_cast<uint8_t>(measurements.size()));
  for (const auto& m : measurements) {
    out.push_back(static_cast<uint8_t>(m.id));
    Append(out, m.hash);
  }
  out.push_back(warranty_bit ? 1 : 0);
  PutU16(out, device_id.size());
  Append(out, ToBytes(device_id));
  out.push_back(static_cast<uint8_t>(verdict));
  return out;
}

Bytes AttestationToken::Serialize() const {
  Bytes out = SignedPortion();
  PutU16(out, signature.size());
  Append(out, signature);
  return out;
}

std::optional<AttestationToken> AttestationToken::Parse(ByteView wire) {
  Reader r(wire);
  AttestationToken t;
  uint8_t len = 0;
  uint8_t byte = 0;
  if (!r.U8(len) || !r.Take(len, t.nonce)) return std::nullopt;
  uint8_t count = 0;
  if (!r.U8(count)) return std::nullopt;
  for (int i = 0; i < count; ++i) {
    Bytes hash;
    if (!r.U8(byte) || byte >= kBootComponentCount) return std::nullopt;
    if (!r.Take(crypto::kSha256Size, hash)) return std::nullopt;
    MeasurementEntry m{static_cast<BootComponentId>(byte), {}};
    std::copy(hash.begin(), hash.end(), m.hash.begin());
    t.measurements.push_back(m);
  }
  if (!r.U8(byte) || byte > 1) return std::nullopt;
  t.warranty_bit = byte == 1;
  size_t id_len = 0;
  Bytes id;
  if (!r.U16(id_len) || !r.Take(id_len, id)) return std::nullopt;
  t.device_id = ToString(id);
  if (!r.U8(byte) || byte > 1) return std::nullopt;
  t.verdict = static_cast<Verdict>(byte);
  size_t sig_len = 0;
  if (!r.U16(sig_len) || !r.Take(sig_len, t.signature)) return std::nullopt;
  if (!r.done()) return std::nullopt;
  return t;
}

const crypto::SigningKey& AttestationKeyFor(std::string_view device_id) {
  static std::mutex mu;
  static std::map<std::string, crypto::SigningKey, std::less<>> keys;
  std::lock_guard<std::mutex> lock(mu);
  auto it = keys.find(device_id);
  if (it == keys.end()) {
    Bytes label = ToBytes("knoxsim attestation/");
    Append(label, ToBytes(device_id));
    it = keys.emplace(std::string(device_id),
                      crypto::SigningKey::FromSeed(crypto::Sha256(label)))
             .first;
  }
  return it->second;
}

Verdict ComputeVerdict(bool warranty_bit, bool verify_failures, bool anomalies) {
  return (!warranty_bit && !verify_failures && !anomalies) ? Verdict::kSecure
                                                           : Verdict::kCompromised;
}

Result<AttestationToken, TrustError> GenerateAttestation(DeviceState& device,
                                                         ByteView nonce) {
  if (device.power != PowerState::kBooted) return Fail(TrustError::kNotBooted);
  if (nonce.size() != kNonceSize) return Fail(TrustError::kMalformedBlob);
  AttestationToken t;
  t.nonce.assign(nonce.begin(), nonce.end());
  t.measurements = device.measurement_log.entries;
  t.warranty_bit = device.efuse.warranty_bit();
  t.device_id = device.profile.device_id;
  t.verdict = ComputeVerdict(t.warranty_bit,
                             !device.measurement_log.verify_failures.empty(),
                             !device.trust.anomaly_log.empty());
  t.signature = AttestationKeyFor(t.device_id).Sign(t.SignedPortion());
  return t;
}

std::string_view Name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kBadSignature:
      return "BadSignature";
    case RejectReason::kNonceReplay:
      return "NonceReplay";
    case RejectReason::kMeasurementMismatch:
      return "MeasurementMismatch";
    case RejectReason::kCompromisedVerdict:
      return "CompromisedVerdict";
  }
  return "?";
}

Status<RejectReason> AttestationVerifier::Verify(
    ByteView token_wire, const std::vector<MeasurementEntry>& golden,
    ByteView expected_nonce, ByteView device_pubkey) {
  auto token = AttestationToken::Parse(token_wire);
  if (!token) return Fail(RejectReason::kBadSignature);
  if (!crypto::VerifySignature(device_pubkey, token->SignedPortion(),
                               token->signature)) {
    return Fail(RejectReason::kBadSignature);
  }
  if (seen_.contains(token->nonce) ||
      !crypto::ConstantTimeEqual(token->nonce, expected_nonce)) {
    return Fail(RejectReason::kNonceReplay);
  }
  seen_.insert(token->nonce);
  order_.push_back(token->nonce);
  if (order_.size() > max_remembered_) {
    seen_.erase(order_.front());
    order_.pop_front();
  }
  if (token->measurements != golden) return Fail(RejectReason::kMeasurementMismatch);
  if (token->verdict != Verdict::kSecure) return Fail(RejectReason::kCompromisedVerdict);
  return Ok();
}

std::vector<MeasurementEntry> GoldenMeasurements(const DeviceProfile& profile) {
  std::vector<MeasurementEntry> out;
  for (size_t i = 0; i < kBootComponentCount; ++i) {
    out.push_back({static_cast<BootComponentId>(i), profile.firmware_hashes[i]});
  }
  return out;
}

}  // namespace knoxsim

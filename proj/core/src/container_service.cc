// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/container_service.h"

#include <string>

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

ContainerError FromTrust(TrustError error) {
  switch (error) {
    case TrustError::kNotBooted:
      return ContainerError::kNotBooted;
    case TrustError::kWarrantyBitSet:
      return ContainerError::kWarrantyBitSet;
    case TrustError::kCallerRejected:
      return ContainerError::kCallerRejected;
    case TrustError::kHookDetected:
      return ContainerError::kHookDetected;
    case TrustError::kNotFound:
      return ContainerError::kNoContainer;
    case TrustError::kMalformedBlob:
      return ContainerError::kCorruptPayload;
    case TrustError::kWeakPassword:
      return ContainerError::kWeakPassword;
    case TrustError::kUnknownTrustlet:
    case TrustError::kDenied:
    case TrustError::kNotExportable:
      return ContainerError::kDenied;
  }
  return ContainerError::kDenied;
}

// What a keystore_override hook in system_server hands back instead of
// calling into the secure world.
Key256 OverrideKey() { return crypto::Sha256(ToBytes("knoxsim hooked tima key")); }

bool KeystoreHooked(const DeviceState& device) {
  const Process* ss = device.processes.Find("system_server");
  return ss && ss->hooks.contains(Hook::kKeystoreOverride);
}

// The TIMA front end in system_server.
Status<ContainerError> TimaInstall(DeviceState& device, const Key256& key) {
  if (KeystoreHooked(device)) {
    Log(device, "tima install answered by hook");
    return Ok();
  }
  auto r = TimaKeystoreInstall(device, PidOf(device, "system_server"),
                               kContainerId, key);
  Log(device, "smc TimaKeystore.install -> " +
                  std::string(r ? "Ok" : Name(r.error())));
  if (!r) return Fail(FromTrust(r.error()));
  return Ok();
}

Result<Key256, TrustError> TimaRetrieve(DeviceState& device) {
  if (KeystoreHooked(device)) {
    Key256 key = OverrideKey();
    device.exposure.Record(SecretKind::kTimaKey, "system_server", device.tick,
                           Bytes(key.begin(), key.end()));
    Log(device, "tima retrieve answered by hook");
    return key;
  }
  auto r = TimaKeystoreRetrieve(device, PidOf(device, "system_server"), kContainerId);
  Log(device, "smc TimaKeystore.retrieve -> " +
                  std::string(r ? "Ok" : Name(r.error())));
  return r;
}

// eCryptFS key for `password`, computed where the profile says the TIMA key
// lives.
Result<std::string, ContainerError> EcryptfsKeyFor(DeviceState& device,
                                                   std::string_view password) {
  if (device.profile.tima_key_in_tz && !KeystoreHooked(device)) {
    auto r = TimaKeystoreDeriveKey(device, PidOf(device, "system_server"),
                                   kContainerId, password);
    Log(device, "smc TimaKeystore.derive -> " +
                    std::string(r ? "Ok" : Name(r.error())));
    if (!r) return Fail(FromTrust(r.error()));
    return *r;
  }
  auto tima_key = TimaRetrieve(device);
  if (!tima_key) return Fail(FromTrust(tima_key.error()));
  auto key = DeriveEcryptfsKey(device.profile.knox_version, password, *tima_key);
  if (!key) return Fail(ContainerError::kWeakPassword);
  return key->chars();
}

Status<ContainerError> ProvisionTimaKey(DeviceState& device) {
  if (device.profile.tima_key_in_tz && !KeystoreHooked(device)) {
    if (device.trust.installed_keys.contains(kContainerId) &&
        !device.efuse.warranty_bit()) {
      return Ok();
    }
    auto r = TimaKeystoreGenerate(device, PidOf(device, "system_server"), kContainerId);
    Log(device, "smc TimaKeystore.generate -> " +
                    std::string(r ? "Ok" : Name(r.error())));
    if (!r) return Fail(FromTrust(r.error()));
    return Ok();
  }
  // The key is minted once per device and reused by later containers.
  auto existing = TimaRetrieve(device);
  if (existing) return Ok();
  if (existing.error() != TrustError::kNotFound) return Fail(FromTrust(existing.error()));
  Key256 key = device.rng.NextArray<32>();
  device.exposure.Record(SecretKind::kTimaKey, "system_server", device.tick,
                         Bytes(key.begin(), key.end()));
  return TimaInstall(device, key);
}

Status<ContainerError> TypePassword(DeviceState& device, std::string_view password) {
  auto trace = KeyboardInput(device, PidOf(device, "container_agent"), password,
                             SecretKind::kPassword);
  if (!trace) return Fail(ContainerError::kUntrustedKeyboard);
  return Ok();
}

Status<ContainerError> CheckPassword(DeviceState& device, std::string_view password) {
  auto hash = device.fs.Read(kPasswordHashPath, UidClass::kSystem);
  auto salt = device.fs.Read(kPasswordSaltPath, UidClass::kSystem);
  if (!hash || !salt) return Fail(ContainerError::kNoContainer);
  auto match = VerifyPassword({ToString(*hash), ToString(*salt)}, password);
  if (!match) return Fail(ContainerError::kMalformedRecord);
  if (!*match) return Fail(ContainerError::kBadPassword);
  return Ok();
}

void StorePasswordRecord(DeviceState& device, std::string_view password) {
  std::string salt = ToHex(device.rng.NextBytes(8));
  device.fs.Write(kPasswordHashPath, ToBytes(HashPasswordCurrent(password, salt)),
                  FileAccess::kSystem);
  device.fs.Write(kPasswordSaltPath, ToBytes(salt), FileAccess::kWorldReadable);
}

// vold holding the SecureStorage session open for one request.
class VoldSession {
 public:
  explicit VoldSession(DeviceState& device) : vold_(device.processes.Find("vold")) {
    if (vold_) vold_->mounting = true;
  }
  ~VoldSession() {
    if (vold_) vold_->mounting = false;
  }
  VoldSession(const VoldSession&) = delete;
  VoldSession& operator=(const VoldSession&) = delete;

  Pid pid() const { return vold_ ? vold_->pid : Pid{0}; }

 private:
  Process* vold_;
};

Result<EdkPayload, ContainerError> VoldReadEdk(DeviceState& device, Pid vold) {
  auto blob = device.fs.Read(kEdkPath, UidClass::kRoot);
  if (!blob) return Fail(ContainerError::kNoContainer);
  auto plain = SecureStorageDecryptBlob(device, vold, *blob);
  Log(device, "smc SecureStorage.decrypt by vold -> " +
                  std::string(plain ? "Ok" : Name(plain.error())));
  if (!plain) return Fail(FromTrust(plain.error()));
  auto payload = EdkPayload::Parse(*plain);
  if (!payload) return Fail(ContainerError::kCorruptPayload);
  return *payload;
}

Status<ContainerError> VoldWriteEdk(DeviceState& device, Pid vold,
                                    const EdkPayload& payload) {
  auto blob = SecureStorageEncryptBlob(device, vold, payload.Serialize());
  if (!blob) return Fail(FromTrust(blob.error()));
  device.fs.Write(kEdkPath, *std::move(blob), FileAccess::kRootOnly);
  return Ok();
}

void ShowLoginWindow(DeviceState& device) {
  if (FindWindow(device, "knox_login")) return;
  OpenWindow(device, PidOf(device, "container_agent"), "knox_login",
             "KNOX login | password: ");
}

void SetSelector(DeviceState& device, int id) {
  device.clipboard.current_container_id = id;
}

}  // namespace

std::string_view Name(SessionPhase phase) {
  switch (phase) {
    case SessionPhase::kNoContainer:
      return "NoContainer";
    case SessionPhase::kLocked:
      return "Locked";
    case SessionPhase::kUnlocked:
      return "Unlocked";
    case SessionPhase::kBackground:
      return "Background";
  }
  return "?";
}

std::string_view Name(ContainerError error) {
  switch (error) {
    case ContainerError::kNotBooted:
      return "NotBooted";
    case ContainerError::kAlreadyExists:
      return "AlreadyExists";
    case ContainerError::kNoContainer:
      return "NoContainer";
    case ContainerError::kWeakPassword:
      return "WeakPassword";
    case ContainerError::kWarrantyBitSet:
      return "WarrantyBitSet";
    case ContainerError::kBadPassword:
      return "BadPassword";
    case ContainerError::kMalformedRecord:
      return "MalformedRecord";
    case ContainerError::kHmacMismatch:
      return "HmacMismatch";
    case ContainerError::kCallerRejected:
      return "CallerRejected";
    case ContainerError::kHookDetected:
      return "HookDetected";
    case ContainerError::kUntrustedKeyboard:
      return "UntrustedKeyboard";
    case ContainerError::kCorruptPayload:
      return "CorruptPayload";
    case ContainerError::kDenied:
      return "Denied";
    case ContainerError::kNotUnlocked:
      return "NotUnlocked";
  }
  return "?";
}

std::string_view Describe(ContainerError error) {
  switch (error) {
    case ContainerError::kWarrantyBitSet:
      return "Your device is not authorized to enter Samsung KNOX mode";
    case ContainerError::kWeakPassword:
      return "Password must be at least 7 characters";
    case ContainerError::kBadPassword:
      return "Incorrect password";
    default:
      return "Unable to open KNOX";
  }
}

Status<ContainerError> ContainerCreate(DeviceState& device,
                                       std::string_view password) {
  if (device.power != PowerState::kBooted) return Fail(ContainerError::kNotBooted);
  if (device.container_exists) return Fail(ContainerError::kAlreadyExists);
  if (password.size() < kMinPasswordLength) return Fail(ContainerError::kWeakPassword);
  Log(device, "container_create");
  if (auto typed = TypePassword(device, password); !typed) return typed;
  if (auto tima = ProvisionTimaKey(device); !tima) return tima;
  auto key_chars = EcryptfsKeyFor(device, password);
  if (!key_chars) return Fail(key_chars.error());
  auto key = EcryptfsKey::FromChars(*key_chars);

  VoldSession vold(device);
  SealedDek sealed = SealDek(*key, device.rng);
  device.exposure.Record(SecretKind::kDek, "vold", device.tick,
                         Bytes(sealed.dek.begin(), sealed.dek.end()));
  if (auto wrote = VoldWriteEdk(device, vold.pid(), sealed.payload); !wrote) {
    return wrote;
  }
  StorePasswordRecord(device, password);
  device.container_exists = true;
  device.session.phase = SessionPhase::kLocked;
  ShowLoginWindow(device);
  return Ok();
}

Status<ContainerError> VoldMountCommand(DeviceState& device, Pid caller,
                                        int container_id,
                                        std::string_view ecryptfs_key) {
  const Process* p = device.processes.Get(caller);
  if (!p || (p->uid_class != UidClass::kSystem && p->uid_class != UidClass::kRoot)) {
    return Fail(ContainerError::kDenied);
  }
  Log(device, "vold cryptfs mount " + std::to_string(container_id) + " from " + p->name);
  auto key = EcryptfsKey::FromChars(std::string(ecryptfs_key));
  if (!key) return Fail(ContainerError::kCorruptPayload);
  if (IsMounted(device, container_id)) return Ok();

  VoldSession vold(device);
  auto payload = VoldReadEdk(device, vold.pid());
  if (!payload) return Fail(payload.error());
  auto dek = UnsealDek(*payload, *key);
  if (!dek) {
    Log(device, "vold unseal HmacMismatch");
    return Fail(ContainerError::kHmacMismatch);
  }
  auto mounted = MountContainer(device, container_id, *dek);
  if (!mounted) return Fail(ContainerError::kNotBooted);
  return Ok();
}

Status<ContainerError> ContainerLogin(DeviceState& device,
                                      std::string_view password) {
  if (device.power != PowerState::kBooted) return Fail(ContainerError::kNotBooted);
  if (!device.container_exists) return Fail(ContainerError::kNoContainer);
  Log(device, "container_login");
  ShowLoginWindow(device);
  if (auto typed = TypePassword(device, password); !typed) return typed;
  if (auto checked = CheckPassword(device, password); !checked) return checked;
  auto key_chars = EcryptfsKeyFor(device, password);
  if (!key_chars) return Fail(key_chars.error());
  auto mounted = VoldMountCommand(device, PidOf(device, "system_server"),
                                  kContainerId, *key_chars);
  if (!mounted) return mounted;

  device.session.phase = SessionPhase::kUnlocked;
  device.session.foreground_user = kContainerUserId;
  SetSelector(device, kContainerId);
  if (auto login = FindWindow(device, "knox_login")) {
    device.windows.windows.erase(*login);
  }
  if (!FindWindow(device, "knox_home")) {
    OpenWindow(device, PidOf(device, "container_agent"), "knox_home", "KNOX home");
  }
  return Ok();
}

void ContainerLock(DeviceState& device) {
  if (device.session.phase != SessionPhase::kUnlocked &&
      device.session.phase != SessionPhase::kBackground) {
    return;
  }
  Log(device, "container_lock");
  device.session.phase = SessionPhase::kLocked;
  device.session.foreground_user = kOwnerUserId;
  SetSelector(device, kUserClipboardId);
  if (device.profile.unmount_on_lock) (void)UnmountContainer(device, kContainerId);
  if (auto home = FindWindow(device, "knox_home")) device.windows.windows.erase(*home);
  ShowLoginWindow(device);
}

void ContainerToBackground(DeviceState& device) {
  if (device.session.phase != SessionPhase::kUnlocked) return;
  device.session.phase = SessionPhase::kBackground;
  device.session.foreground_user = kOwnerUserId;
  SetSelector(device, kUserClipboardId);
}

void ContainerToForeground(DeviceState& device) {
  if (device.session.phase != SessionPhase::kBackground) return;
  device.session.phase = SessionPhase::kUnlocked;
  device.session.foreground_user = kContainerUserId;
  SetSelector(device, kContainerId);
}

Status<ContainerError> ContainerChangePassword(DeviceState& device,
                                               std::string_view old_password,
                                               std::string_view new_password) {
  if (device.power != PowerState::kBooted) return Fail(ContainerError::kNotBooted);
  if (!device.container_exists) return Fail(ContainerError::kNoContainer);
  if (new_password.size() < kMinPasswordLength) return Fail(ContainerError::kWeakPassword);
  if (auto checked = CheckPassword(device, old_password); !checked) return checked;
  auto old_chars = EcryptfsKeyFor(device, old_password);
  if (!old_chars) return Fail(old_chars.error());
  auto new_chars = EcryptfsKeyFor(device, new_password);
  if (!new_chars) return Fail(new_chars.error());

  VoldSession vold(device);
  auto payload = VoldReadEdk(device, vold.pid());
  if (!payload) return Fail(payload.error());
  auto rewrapped = RewrapEdk(*payload, *EcryptfsKey::FromChars(*old_chars),
                             *EcryptfsKey::FromChars(*new_chars), device.rng);
  if (!rewrapped) return Fail(ContainerError::kHmacMismatch);
  if (auto wrote = VoldWriteEdk(device, vold.pid(), *rewrapped); !wrote) return wrote;
  StorePasswordRecord(device, new_password);
  Log(device, "container_change_password");
  return Ok();
}

Status<ContainerError> ContainerDelete(DeviceState& device) {
  if (!device.container_exists) return Fail(ContainerError::kNoContainer);
  (void)UnmountContainer(device, kContainerId);
  device.fs.Remove(kEdkPath);
  device.fs.Remove(kPasswordHashPath);
  device.fs.Remove(kPasswordSaltPath);
  for (VolumeKind kind : kAllVolumes) {
    for (const auto& path : device.fs.List(VolumeFor(kContainerId, kind).backing + "/")) {
      device.fs.Remove(path);
    }
  }
  device.container_exists = false;
  device.session.phase = SessionPhase::kNoContainer;
  device.session.foreground_user = kOwnerUserId;
  Log(device, "container_delete");
  return Ok();
}

}  // namespace knoxsim

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/apps.h"

#include <algorithm>

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

constexpr std::string_view kSearchEngineAction =
    "android.intent.action.CSC_BROWSER_SET_SEARCH_ENGINE";

bool ContainerOpen(const DeviceState& device) {
  return device.session.phase == SessionPhase::kUnlocked ||
         device.session.phase == SessionPhase::kBackground;
}

Permission PermissionFor(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kContacts:
      return Permission::kReadContacts;
    case ProviderKind::kCalendar:
      return Permission::kReadCalendar;
    case ProviderKind::kSms:
      return Permission::kReadSms;
  }
  return Permission::kReadContacts;
}

bool Holds(const DeviceState& device, const Process& p, Permission permission) {
  if (p.uid_class == UidClass::kSystem || p.uid_class == UidClass::kRoot) return true;
  const InstalledApp* app = device.apps.Find(p.env, p.package);
  return app && app->granted.contains(permission);
}

}  // namespace

std::string_view Name(Permission permission) {
  switch (permission) {
    case Permission::kReadContacts:
      return "ReadContacts";
    case Permission::kReadCalendar:
      return "ReadCalendar";
    case Permission::kReadSms:
      return "ReadSms";
    case Permission::kReadSdcard:
      return "ReadSdcard";
    case Permission::kInternet:
      return "Internet";
    case Permission::kSendSms:
      return "SendSms";
    case Permission::kVpn:
      return "Vpn";
  }
  return "?";
}

std::string_view Name(InstallError error) {
  switch (error) {
    case InstallError::kNotWrapped:
      return "NotWrapped";
    case InstallError::kNotSamsungSigned:
      return "NotSamsungSigned";
    case InstallError::kBlacklisted:
      return "Blacklisted";
    case InstallError::kNotWhitelisted:
      return "NotWhitelisted";
    case InstallError::kPermissionsDeclined:
      return "PermissionsDeclined";
    case InstallError::kNoContainer:
      return "NoContainer";
  }
  return "?";
}

std::string_view Name(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kContacts:
      return "Contacts";
    case ProviderKind::kCalendar:
      return "Calendar";
    case ProviderKind::kSms:
      return "Sms";
  }
  return "?";
}

std::string_view Name(AdbError error) {
  switch (error) {
    case AdbError::kAdbDisabled:
      return "AdbDisabled";
    case AdbError::kBlocked:
      return "Blocked";
    case AdbError::kNoSuchComponent:
      return "NoSuchComponent";
  }
  return "?";
}

Result<std::string, WrapError> WrapPackage(std::string_view name) {
  if (name.empty()) return Fail(WrapError::kEmptyName);
  if (name.starts_with(kWrapPrefix)) return Fail(WrapError::kAlreadyWrapped);
  return std::string(kWrapPrefix) + std::string(name);
}

InstalledApp* AppRegistry::Find(Env env, std::string_view package) {
  auto it = apps.find({env, std::string(package)});
  return it == apps.end() ? nullptr : &it->second;
}

const InstalledApp* AppRegistry::Find(Env env, std::string_view package) const {
  auto it = apps.find({env, std::string(package)});
  return it == apps.end() ? nullptr : &it->second;
}

std::vector<std::string>& ProviderData::Get(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kContacts:
      return contacts;
    case ProviderKind::kCalendar:
      return calendar;
    case ProviderKind::kSms:
      return sms;
  }
  return contacts;
}

const std::vector<std::string>& ProviderData::Get(ProviderKind kind) const {
  return const_cast<ProviderData*>(this)->Get(kind);
}

Status<InstallError> InstallApp(DeviceState& device, Env target,
                                const AppManifest& manifest,
                                bool accept_permissions) {
  auto reject = [&](InstallError error) -> Status<InstallError> {
    Log(device, "install " + manifest.package + " -> " + std::string(Name(error)));
    return Fail(error);
  };
  if (target == Env::kContainer) {
    if (!device.container_exists) return reject(InstallError::kNoContainer);
    if (device.profile.knox_version == KnoxVersion::kV1_0) {
      if (!manifest.wrapped()) return reject(InstallError::kNotWrapped);
      if (manifest.signer != Signer::kSamsung) return reject(InstallError::kNotSamsungSigned);
    } else {
      const InstallPolicy& policy = device.profile.install_policy;
      if (policy.blacklist.contains(manifest.package)) {
        return reject(InstallError::kBlacklisted);
      }
      if (policy.whitelist_enabled && !policy.whitelist.contains(manifest.package)) {
        return reject(InstallError::kNotWhitelisted);
      }
    }
  }
  InstalledApp* existing = device.apps.Find(target, manifest.package);
  if (existing && std::includes(existing->granted.begin(), existing->granted.end(),
                                manifest.permissions.begin(),
                                manifest.permissions.end())) {
    // Same or fewer permissions: the update goes through without a prompt.
    existing->manifest = manifest;
    Log(device, "update " + manifest.package + " -> Ok (no prompt)");
    return Ok();
  }
  if (!manifest.permissions.empty() && !accept_permissions) {
    return reject(InstallError::kPermissionsDeclined);
  }
  InstalledApp app;
  if (existing) app = *existing;
  app.manifest = manifest;
  app.env = target;
  app.granted = manifest.permissions;
  device.apps.apps[{target, manifest.package}] = app;
  Log(device, "install " + manifest.package + " into " + std::string(Name(target)) +
                  " -> Ok");
  return Ok();
}

Result<Pid, LaunchError> LaunchApp(DeviceState& device, Env env,
                                   std::string_view package) {
  if (!device.apps.Find(env, package)) return Fail(LaunchError::kNotInstalled);
  if (env == Env::kContainer && !ContainerOpen(device)) {
    return Fail(LaunchError::kContainerLocked);
  }
  for (const auto& [pid, p] : device.processes.all()) {
    if (p.env == env && p.package == package) return p.pid;
  }
  Process proto;
  proto.name = std::string(package);
  proto.package = std::string(package);
  proto.env = env;
  proto.uid_class = UidClass::kUntrusted;
  proto.label = "untrusted_app";
  if (env == Env::kContainer) {
    if (device.profile.knox_version == KnoxVersion::kV2_3) {
      proto.user_id = kContainerUserId;
      proto.category = "c" + std::to_string(kContainerUserId);
    } else {
      proto.label = "container";
    }
  }
  return device.processes.ForkFromZygote(std::move(proto));
}

void StartUserActivity(DeviceState& device, Pid caller) {
  const Process* p = device.processes.Get(caller);
  Log(device, "start user activity by " + (p ? p->name : std::string("?")));
  ClipboardOnUserActivityLaunch(device);
  ContainerToBackground(device);
}

Result<std::vector<std::string>, ProviderError> QueryProvider(
    const DeviceState& device, Pid caller, ProviderKind kind) {
  const Process* p = device.processes.Get(caller);
  if (!p) return Fail(ProviderError::kNoSuchProcess);
  if (!Holds(device, *p, PermissionFor(kind))) return Fail(ProviderError::kPermissionDenied);
  auto it = device.providers.find(p->env);
  if (it == device.providers.end()) return std::vector<std::string>{};
  return it->second.Get(kind);
}

Result<std::string, SdcardError> ReadSdcardFile(const DeviceState& device,
                                                Pid caller,
                                                const std::string& name) {
  const Process* p = device.processes.Get(caller);
  if (!p || p->env != Env::kContainer || !Holds(device, *p, Permission::kReadSdcard)) {
    return Fail(SdcardError::kPermissionDenied);
  }
  auto content = FileRead(device, kContainerId, VolumeKind::kSdcard, name);
  if (!content) {
    return Fail(content.error() == FileError::kNotMounted ? SdcardError::kNotMounted
                                                          : SdcardError::kNoSuchFile);
  }
  return *content;
}

Status<AdbError> AdbExec(DeviceState& device, const AdbCommand& command) {
  if (!device.profile.adb_enabled || !device.processes.Find("adbd")) {
    Log(device, "adb -> AdbDisabled");
    return Fail(AdbError::kAdbDisabled);
  }
  if (const auto* start = std::get_if<AdbStartActivity>(&command)) {
    const std::string package = start->component.substr(0, start->component.find('/'));
    const Env env = package.starts_with(kWrapPrefix) ? Env::kContainer : Env::kUser;
    if (env == Env::kContainer && !ContainerOpen(device)) return Fail(AdbError::kBlocked);
    InstalledApp* app = device.apps.Find(env, package);
    if (!app) return Fail(AdbError::kNoSuchComponent);
    app->settings["url"] = start->data;
    Log(device, "adb am start " + start->component + " -d " + start->data);
    return Ok();
  }
  const auto& broadcast = std::get<AdbBroadcast>(command);
  std::string_view action = broadcast.action;
  Env env = Env::kUser;
  if (action.starts_with(kWrapPrefix)) {
    if (!ContainerOpen(device)) return Fail(AdbError::kBlocked);
    env = Env::kContainer;
    action.remove_prefix(kWrapPrefix.size());
  }
  if (action != kSearchEngineAction) return Fail(AdbError::kNoSuchComponent);
  bool delivered = false;
  for (auto& [key, app] : device.apps.apps) {
    if (key.first != env || !app.manifest.package.ends_with(kBrowserPackage)) continue;
    if (auto it = broadcast.extras.find("searchEngine"); it != broadcast.extras.end()) {
      app.settings["searchEngine"] = it->second;
    }
    delivered = true;
  }
  if (!delivered) return Fail(AdbError::kNoSuchComponent);
  Log(device, "adb am broadcast " + broadcast.action);
  return Ok();
}

}  // namespace knoxsim

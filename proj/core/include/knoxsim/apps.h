// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Packages, install policy, content providers and the ADB surface.

#ifndef KNOXSIM_APPS_H_
#define KNOXSIM_APPS_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "knoxsim/common.h"
#include "knoxsim/result.h"

namespace knoxsim {

struct DeviceState;

inline constexpr std::string_view kWrapPrefix = "sec_container_1.";
inline constexpr char kBrowserPackage[] = "com.sec.android.app.sbrowser";

enum class Signer { kSamsung, kOther };

enum class Permission {
  kReadContacts,
  kReadCalendar,
  kReadSms,
  kReadSdcard,
  kInternet,
  kSendSms,
  kVpn,
};

std::string_view Name(Permission permission);

struct AppManifest {
  std::string package;
  Signer signer = Signer::kOther;
  std::set<Permission> permissions;
  // Code revision; an update bumps it.
  int version = 1;
  // Marks attacker payloads so tests can tell revisions apart.
  bool malicious = false;

  bool wrapped() const { return package.starts_with(kWrapPrefix); }
};

enum class WrapError { kEmptyName, kAlreadyWrapped };

Result<std::string, WrapError> WrapPackage(std::string_view name);

struct InstalledApp {
  AppManifest manifest;
  Env env = Env::kUser;
  std::set<Permission> granted;
  std::map<std::string, std::string> settings;
};

using AppKey = std::pair<Env, std::string>;

struct AppRegistry {
  std::map<AppKey, InstalledApp> apps;

  InstalledApp* Find(Env env, std::string_view package);
  const InstalledApp* Find(Env env, std::string_view package) const;
};

enum class InstallError {
  kNotWrapped,
  kNotSamsungSigned,
  kBlacklisted,
  kNotWhitelisted,
  kPermissionsDeclined,
  kNoContainer,
};

std::string_view Name(InstallError error);

// A second install of the same package is an update. Updates re-run policy
// but only prompt when the permission set grows.
Status<InstallError> InstallApp(DeviceState& device, Env target,
                                const AppManifest& manifest,
                                bool accept_permissions);

enum class LaunchError { kNotInstalled, kContainerLocked };

// Starts the app's process with the label and user its environment implies.
Result<Pid, LaunchError> LaunchApp(DeviceState& device, Env env,
                                   std::string_view package);

// A user-side app brings an activity to the foreground.
void StartUserActivity(DeviceState& device, Pid caller);

enum class ProviderKind { kContacts, kCalendar, kSms };

std::string_view Name(ProviderKind kind);

struct ProviderData {
  std::vector<std::string> contacts;
  std::vector<std::string> calendar;
  std::vector<std::string> sms;

  std::vector<std::string>& Get(ProviderKind kind);
  const std::vector<std::string>& Get(ProviderKind kind) const;
};

enum class ProviderError { kPermissionDenied, kNoSuchProcess };

// Rows of `kind` from the caller's own environment.
Result<std::vector<std::string>, ProviderError> QueryProvider(
    const DeviceState& device, Pid caller, ProviderKind kind);

enum class SdcardError { kPermissionDenied, kNotMounted, kNoSuchFile };

// Container app reads a file on the container sdcard volume.
Result<std::string, SdcardError> ReadSdcardFile(const DeviceState& device,
                                                Pid caller,
                                                const std::string& name);

struct AdbStartActivity {
  std::string component;
  std::string data;
};
struct AdbBroadcast {
  std::string action;
  std::map<std::string, std::string> extras;
};
using AdbCommand = std::variant<AdbStartActivity, AdbBroadcast>;

enum class AdbError { kAdbDisabled, kBlocked, kNoSuchComponent };

std::string_view Name(AdbError error);

// Runs as the shell user over USB.
Status<AdbError> AdbExec(DeviceState& device, const AdbCommand& command);

}  // namespace knoxsim

#endif  // KNOXSIM_APPS_H_

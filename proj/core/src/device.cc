// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/device.h"

#include <string>

namespace knoxsim {
namespace {

bool V2(const DeviceState& device) {
  return device.profile.knox_version == KnoxVersion::kV2_3;
}

Process ContainerAppProto(const DeviceState& device, std::string name) {
  Process p;
  p.name = std::move(name);
  p.env = Env::kContainer;
  p.uid_class = UidClass::kUntrusted;
  if (V2(device)) {
    p.user_id = kContainerUserId;
    p.label = "untrusted_app";
    p.category = "c" + std::to_string(kContainerUserId);
  } else {
    p.label = "container";
  }
  return p;
}

void InstallStockApps(DeviceState& device) {
  InstalledApp user_browser;
  user_browser.manifest = {kBrowserPackage, Signer::kSamsung,
                           {Permission::kInternet}};
  user_browser.granted = user_browser.manifest.permissions;
  device.apps.apps[{Env::kUser, kBrowserPackage}] = user_browser;

  InstalledApp knox_browser = user_browser;
  knox_browser.env = Env::kContainer;
  if (!V2(device)) {
    knox_browser.manifest.package = *WrapPackage(kBrowserPackage);
  }
  device.apps.apps[{Env::kContainer, knox_browser.manifest.package}] = knox_browser;
}

}  // namespace

DeviceState CreateDevice(const DeviceProfile& profile, uint64_t seed) {
  DeviceState device(profile, seed);
  device.firmware = MakeVendorFirmware(profile.model, profile.system_block_count);
  device.block_store.Provision(device.firmware.system_blocks, profile.critical_blocks);
  device.certs.system_roots = {SystemRootCa()};
  InstallStockApps(device);
  device.providers[Env::kUser];
  device.providers[Env::kContainer];
  (void)BootDevice(device);
  return device;
}

void InitializeRuntime(DeviceState& device) {
  const BootComponent& kernel =
      device.firmware.components[static_cast<size_t>(BootComponentId::kKernel)];
  device.kernel = KernelState{};
  device.kernel.code = kernel.content;
  device.trust.boot_kernel_hash = crypto::Sha256(device.kernel.code);
  device.trust.boot_selinux_enforcing = device.kernel.selinux_enforcing;

  ProcessTable& procs = device.processes;
  procs.Clear();
  procs.Spawn({.name = "zygote", .label = "zygote", .uid_class = UidClass::kRoot});
  procs.ForkFromZygote({.name = "system_server",
                        .label = "system_server",
                        .uid_class = UidClass::kSystem});
  procs.ForkFromZygote({.name = kVendorKeyboard,
                        .label = "platform_app",
                        .uid_class = UidClass::kUntrusted});
  if (device.profile.separate_keyboard) {
    Process knox_keyboard = ContainerAppProto(device, kContainerKeyboard);
    knox_keyboard.label = "platform_app";
    procs.ForkFromZygote(knox_keyboard);
  }
  procs.ForkFromZygote(ContainerAppProto(device, "container_agent"));
  procs.Spawn({.name = "vold", .label = "vold", .uid_class = UidClass::kRoot});
  if (device.profile.adb_enabled) {
    procs.Spawn({.name = "adbd", .label = "shell", .uid_class = UidClass::kShell});
  }

  device.certs.scope = device.profile.separate_cert_store ? CertScope::kPerEnvironment
                                                          : CertScope::kShared;
  device.certs.system_roots = {SystemRootCa()};
  device.clipboard.Restore(device.fs);
  device.session.phase =
      device.container_exists ? SessionPhase::kLocked : SessionPhase::kNoContainer;
  device.session.foreground_user = kOwnerUserId;
  if (device.container_exists) {
    OpenWindow(device, PidOf(device, "container_agent"), "knox_login",
               "KNOX login | password: ");
  }
}

void TeardownRuntime(DeviceState& device) {
  device.processes.Clear();
  device.mounts.clear();
  device.exposure.DropResidency();
  device.vpn.active.clear();
  device.windows = WindowManager{};
  device.clipboard.current_container_id = kUserClipboardId;
  device.clipboard.race_until_tick.reset();
  device.session.phase =
      device.container_exists ? SessionPhase::kLocked : SessionPhase::kNoContainer;
  device.session.foreground_user = kOwnerUserId;
}

void AdvanceTick(DeviceState& device, uint64_t ticks) { device.tick += ticks; }

void Log(DeviceState& device, std::string message) {
  device.trace.push_back("t" + std::to_string(device.tick) + " " + message);
}

Pid PidOf(const DeviceState& device, std::string_view name) {
  const Process* p = device.processes.Find(name);
  return p ? p->pid : Pid{0};
}

}  // namespace knoxsim

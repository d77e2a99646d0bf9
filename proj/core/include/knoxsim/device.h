// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// The whole simulated handset.

#ifndef KNOXSIM_DEVICE_H_
#define KNOXSIM_DEVICE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "knoxsim/apps.h"
#include "knoxsim/clipboard.h"
#include "knoxsim/container_crypto.h"
#include "knoxsim/container_service.h"
#include "knoxsim/exposure.h"
#include "knoxsim/filesystem.h"
#include "knoxsim/input.h"
#include "knoxsim/network.h"
#include "knoxsim/process.h"
#include "knoxsim/rng.h"
#include "knoxsim/secure_boot.h"
#include "knoxsim/trust_world.h"

namespace knoxsim {

struct DeviceState {
  DeviceState(DeviceProfile p, uint64_t s) : profile(std::move(p)), seed(s), rng(s) {}

  DeviceProfile profile;
  uint64_t seed;
  DeterministicRng rng;
  uint64_t tick = 0;

  // Persistent hardware and storage.
  EFuse efuse;
  FirmwareImage firmware;
  BlockStore block_store;
  SimFileSystem fs;
  SecureWorldState trust;
  // Secure-world region.
  MeasurementLog measurement_log;

  // Volatile; rebuilt on every boot.
  PowerState power = PowerState::kOff;
  KernelState kernel;
  ProcessTable processes;
  std::map<std::string, MountEntry> mounts;
  ExposureLedger exposure;
  SessionState session;
  ClipboardStore clipboard;
  CertStore certs;
  VpnState vpn;
  KeyboardSelection keyboards;
  WindowManager windows;

  // Installed packages and provider rows persist on /data.
  AppRegistry apps;
  std::map<Env, ProviderData> providers;
  bool container_exists = false;

  // Ordered operation log for reports.
  std::vector<std::string> trace;
};

// Provisions a factory-fresh device with the stock firmware and boots it.
DeviceState CreateDevice(const DeviceProfile& profile, uint64_t seed);

// Called by BootDevice once the chain verified: starts the boot process set
// and reloads persisted service state.
void InitializeRuntime(DeviceState& device);

// Tears down everything volatile. Used by power-off and reboot.
void TeardownRuntime(DeviceState& device);

void AdvanceTick(DeviceState& device, uint64_t ticks = 1);

void Log(DeviceState& device, std::string message);

// Pid of the named boot process, or Pid{0}.
Pid PidOf(const DeviceState& device, std::string_view name);

}  // namespace knoxsim

#endif  // KNOXSIM_DEVICE_H_

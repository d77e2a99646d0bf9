// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// The Enterprise Container service in system_server and its vold partner.

#ifndef KNOXSIM_CONTAINER_SERVICE_H_
#define KNOXSIM_CONTAINER_SERVICE_H_

#include <string>
#include <string_view>

#include "knoxsim/common.h"
#include "knoxsim/result.h"

namespace knoxsim {

struct DeviceState;

enum class SessionPhase { kNoContainer, kLocked, kUnlocked, kBackground };

std::string_view Name(SessionPhase phase);

struct SessionState {
  int container_id = kContainerId;
  SessionPhase phase = SessionPhase::kNoContainer;
  int foreground_user = kOwnerUserId;
};

enum class ContainerError {
  kNotBooted,
  kAlreadyExists,
  kNoContainer,
  kWeakPassword,
  kWarrantyBitSet,
  kBadPassword,
  kMalformedRecord,
  kHmacMismatch,
  kCallerRejected,
  kHookDetected,
  kUntrustedKeyboard,
  kCorruptPayload,
  kDenied,
  kNotUnlocked,
};

std::string_view Name(ContainerError error);

// Text the container agent shows the user for a failed create or login.
std::string_view Describe(ContainerError error);

Status<ContainerError> ContainerCreate(DeviceState& device,
                                       std::string_view password);

// The password is typed into container_agent through the keyboard chain.
Status<ContainerError> ContainerLogin(DeviceState& device,
                                      std::string_view password);

// Leaves volumes mounted unless the profile asks for unmount_on_lock.
void ContainerLock(DeviceState& device);

// Moves an unlocked container behind a user-side app.
void ContainerToBackground(DeviceState& device);
void ContainerToForeground(DeviceState& device);

// Re-hashes the password and rewraps the DEK under the new key.
Status<ContainerError> ContainerChangePassword(DeviceState& device,
                                               std::string_view old_password,
                                               std::string_view new_password);

// Removes the container's files. The installed TIMA key stays put.
Status<ContainerError> ContainerDelete(DeviceState& device);

// vold's text command "cryptfs mount <id> <key>". Accepted from system and
// root callers; vold then reads the EDK file, asks SecureStorage to decrypt
// it, unseals the DEK and mounts both volumes.
Status<ContainerError> VoldMountCommand(DeviceState& device, Pid caller,
                                        int container_id,
                                        std::string_view ecryptfs_key);

}  // namespace knoxsim

#endif  // KNOXSIM_CONTAINER_SERVICE_H_

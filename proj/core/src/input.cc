// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/input.h"

#include "knoxsim/device.h"

namespace knoxsim {

std::string_view Name(InputError error) {
  return error == InputError::kUntrustedKeyboard ? "UntrustedKeyboard"
                                                 : "NoSuchProcess";
}

std::string_view Name(ScreenError error) {
  return error == ScreenError::kSecureWindowBlocked ? "SecureWindowBlocked"
                                                    : "NoSuchWindow";
}

Result<std::vector<std::string>, InputError> KeyboardInput(
    DeviceState& device, Pid target, std::string_view text,
    std::optional<SecretKind> secret) {
  const Process* dest = device.processes.Get(target);
  if (!dest) return Fail(InputError::kNoSuchProcess);
  std::string keyboard = device.keyboards.user;
  if (dest->env == Env::kContainer) {
    const std::string stock = device.profile.separate_keyboard ? kContainerKeyboard
                                                               : kVendorKeyboard;
    keyboard = device.keyboards.container.empty() ? stock : device.keyboards.container;
    // Only the vendor keyboard may type into the container.
    if (keyboard != stock) return Fail(InputError::kUntrustedKeyboard);
  }
  if (!device.processes.Find(keyboard)) return Fail(InputError::kNoSuchProcess);
  std::vector<std::string> trace = {keyboard, "system_server", dest->name};
  if (secret) {
    for (const auto& hop : trace) {
      device.exposure.Record(*secret, hop, device.tick, ToBytes(text));
    }
  }
  return trace;
}

int OpenWindow(DeviceState& device, Pid owner, std::string title,
               std::string contents) {
  const Process* p = device.processes.Get(owner);
  Window w;
  w.id = device.windows.next_id++;
  w.owner = owner;
  w.title = std::move(title);
  w.contents = std::move(contents);
  w.secure_flag = p && p->env == Env::kContainer &&
                  !p->hooks.contains(Hook::kSuppressSecureFlag);
  device.windows.windows[w.id] = w;
  return w.id;
}

void CloseWindowsOf(DeviceState& device, Pid owner) {
  std::erase_if(device.windows.windows,
                [&](const auto& kv) { return kv.second.owner == owner; });
}

std::optional<int> FindWindow(const DeviceState& device, std::string_view title) {
  for (const auto& [id, w] : device.windows.windows) {
    if (w.title == title) return id;
  }
  return std::nullopt;
}

Result<std::string, ScreenError> Screenshot(const DeviceState& device, Pid,
                                            int window_id) {
  auto it = device.windows.windows.find(window_id);
  if (it == device.windows.windows.end()) return Fail(ScreenError::kNoSuchWindow);
  if (it->second.secure_flag) return Fail(ScreenError::kSecureWindowBlocked);
  return it->second.title + ": " + it->second.contents;
}

}  // namespace knoxsim

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Keyboard delivery path, windows and screen capture.

#ifndef KNOXSIM_INPUT_H_
#define KNOXSIM_INPUT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/common.h"
#include "knoxsim/exposure.h"
#include "knoxsim/result.h"

namespace knoxsim {

struct DeviceState;

inline constexpr char kVendorKeyboard[] = "keyboard";
inline constexpr char kContainerKeyboard[] = "keyboard_knox";

enum class InputError { kUntrustedKeyboard, kNoSuchProcess };

std::string_view Name(InputError error);

// Delivers `text` to `target` and returns the processes it passed through.
// When `secret` is set every hop is recorded in the exposure ledger.
Result<std::vector<std::string>, InputError> KeyboardInput(
    DeviceState& device, Pid target, std::string_view text,
    std::optional<SecretKind> secret);

// The input method the user picked for each environment. A third-party name
// for the container environment is refused at delivery time.
struct KeyboardSelection {
  std::string user = kVendorKeyboard;
  std::string container;  // empty: version default
};

struct Window {
  int id = 0;
  Pid owner;
  std::string title;
  std::string contents;
  bool secure_flag = false;
};

struct WindowManager {
  std::map<int, Window> windows;
  int next_id = 1;
};

// Container processes ask for FLAG_SECURE unless a hook suppresses it.
int OpenWindow(DeviceState& device, Pid owner, std::string title,
               std::string contents);
void CloseWindowsOf(DeviceState& device, Pid owner);
std::optional<int> FindWindow(const DeviceState& device,
                              std::string_view title);

enum class ScreenError { kSecureWindowBlocked, kNoSuchWindow };

std::string_view Name(ScreenError error);

Result<std::string, ScreenError> Screenshot(const DeviceState& device,
                                            Pid caller, int window_id);

}  // namespace knoxsim

#endif  // KNOXSIM_INPUT_H_

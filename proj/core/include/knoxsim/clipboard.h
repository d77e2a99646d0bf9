// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// clipboardEx: one service in system_server serving both environments.

#ifndef KNOXSIM_CLIPBOARD_H_
#define KNOXSIM_CLIPBOARD_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/common.h"
#include "knoxsim/result.h"

namespace knoxsim {

struct DeviceState;
class SimFileSystem;

inline constexpr char kUserClipboardPath[] = "/data/clipboard/clips";
inline constexpr char kContainerClipboardPath[] = "/data/clipboard/knox/clips";
// Owner's user id doubles as the user environment's clipboard id.
inline constexpr int kUserClipboardId = 0;

struct ClipItem {
  std::string text;
  // 2.3 sharing policy: the container owner released this clip to the user
  // environment.
  bool shared = false;

  bool operator==(const ClipItem&) const = default;
};

struct ClipboardStore {
  // mContainerID.
  int current_container_id = kUserClipboardId;
  std::map<int, std::vector<ClipItem>> clips;
  // 2.3 race: the selector points at the container until this tick.
  std::optional<uint64_t> race_until_tick;

  // Writes both lists to their plaintext files.
  void Persist(SimFileSystem& fs) const;
  // Reloads lists after boot. The selector resets.
  void Restore(const SimFileSystem& fs);
};

enum class ClipboardError { kDenied, kNoSuchProcess };

std::string_view Name(ClipboardError error);

Status<ClipboardError> ClipboardUpdateDb(DeviceState& device, Pid caller,
                                         int container_id);

// getClipedStrings(begin, begin + count).
Result<std::vector<std::string>, ClipboardError> ClipboardRead(
    DeviceState& device, Pid caller, size_t begin, size_t count);

Status<ClipboardError> ClipboardWrite(DeviceState& device, Pid caller,
                                      Env target, std::string_view text,
                                      bool share_with_user = false);

// Fired by the activity manager when a user-side activity starts. On 2.3 with
// the container unlocked in the foreground this opens the race window.
void ClipboardOnUserActivityLaunch(DeviceState& device);

}  // namespace knoxsim

#endif  // KNOXSIM_CLIPBOARD_H_

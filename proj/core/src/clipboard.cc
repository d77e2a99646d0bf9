// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/clipboard.h"

#include <nlohmann/json.hpp>

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

using nlohmann::json;

int ClipboardIdOf(Env env) {
  return env == Env::kContainer ? kContainerId : kUserClipboardId;
}

bool Privileged(const Process& p) {
  return p.uid_class == UidClass::kSystem || p.uid_class == UidClass::kRoot;
}

bool RaceOpen(const DeviceState& device) {
  return device.clipboard.race_until_tick &&
         device.tick < *device.clipboard.race_until_tick;
}

std::vector<std::string> Slice(const std::vector<ClipItem>& items, size_t begin,
                               size_t count) {
  std::vector<std::string> out;
  for (size_t i = begin; i < items.size() && i < begin + count; ++i) {
    out.push_back(items[i].text);
  }
  return out;
}

Bytes Encode(const std::vector<ClipItem>& items) {
  json doc = json::array();
  for (const auto& item : items) doc.push_back({{"text", item.text}, {"shared", item.shared}});
  return ToBytes(doc.dump());
}

std::vector<ClipItem> Decode(const Bytes& data) {
  std::vector<ClipItem> out;
  json doc = json::parse(ToString(data), nullptr, false);
  if (!doc.is_array()) return out;
  for (const auto& entry : doc) {
    out.push_back({entry.value("text", ""), entry.value("shared", false)});
  }
  return out;
}

}  // namespace

std::string_view Name(ClipboardError error) {
  return error == ClipboardError::kDenied ? "Denied" : "NoSuchProcess";
}

void ClipboardStore::Persist(SimFileSystem& fs) const {
  auto list = [&](int id) {
    auto it = clips.find(id);
    return it == clips.end() ? std::vector<ClipItem>{} : it->second;
  };
  fs.Write(kUserClipboardPath, Encode(list(kUserClipboardId)), FileAccess::kSystem);
  fs.Write(kContainerClipboardPath, Encode(list(kContainerId)), FileAccess::kSystem);
}

void ClipboardStore::Restore(const SimFileSystem& fs) {
  clips.clear();
  if (auto user = fs.Read(kUserClipboardPath, UidClass::kRoot)) {
    clips[kUserClipboardId] = Decode(*user);
  }
  if (auto knox = fs.Read(kContainerClipboardPath, UidClass::kRoot)) {
    clips[kContainerId] = Decode(*knox);
  }
  current_container_id = kUserClipboardId;
  race_until_tick.reset();
}

Status<ClipboardError> ClipboardUpdateDb(DeviceState& device, Pid caller,
                                         int container_id) {
  const Process* p = device.processes.Get(caller);
  if (!p) return Fail(ClipboardError::kNoSuchProcess);
  if (device.profile.knox_version == KnoxVersion::kV2_3 && !Privileged(*p)) {
    const int own_user = container_id == kContainerId ? kContainerUserId : kOwnerUserId;
    if (p->user_id != own_user) {
      Log(device, "clipboard UpdateClipboardDB(" + std::to_string(container_id) +
                      ") by " + p->name + " -> Denied");
      return Fail(ClipboardError::kDenied);
    }
  }
  device.clipboard.current_container_id = container_id;
  Log(device, "clipboard UpdateClipboardDB(" + std::to_string(container_id) + ") by " +
                  p->name + " -> Ok");
  return Ok();
}

Result<std::vector<std::string>, ClipboardError> ClipboardRead(
    DeviceState& device, Pid caller, size_t begin, size_t count) {
  const Process* p = device.processes.Get(caller);
  if (!p) return Fail(ClipboardError::kNoSuchProcess);
  ClipboardStore& store = device.clipboard;
  if (device.profile.knox_version == KnoxVersion::kV1_0 || Privileged(*p)) {
    return Slice(store.clips[store.current_container_id], begin, count);
  }
  if (p->user_id == kOwnerUserId && RaceOpen(device)) {
    return Slice(store.clips[kContainerId], begin, count);
  }
  if (p->user_id == kContainerUserId) {
    return Slice(store.clips[kContainerId], begin, count);
  }
  std::vector<ClipItem> visible = store.clips[kUserClipboardId];
  if (device.profile.clipboard_sharing_policy) {
    for (const auto& item : store.clips[kContainerId]) {
      if (item.shared) visible.push_back(item);
    }
  }
  return Slice(visible, begin, count);
}

Status<ClipboardError> ClipboardWrite(DeviceState& device, Pid caller,
                                      Env target, std::string_view text,
                                      bool share_with_user) {
  const Process* p = device.processes.Get(caller);
  if (!p) return Fail(ClipboardError::kNoSuchProcess);
  if (p->env != target && !Privileged(*p)) return Fail(ClipboardError::kDenied);
  const bool shared = share_with_user && target == Env::kContainer &&
                      device.profile.clipboard_sharing_policy;
  device.clipboard.clips[ClipboardIdOf(target)].push_back({std::string(text), shared});
  device.clipboard.Persist(device.fs);
  device.exposure.Record(SecretKind::kClipText, "system_server", device.tick,
                         ToBytes(text));
  Log(device, "clipboard write by " + p->name);
  return Ok();
}

void ClipboardOnUserActivityLaunch(DeviceState& device) {
  if (device.profile.knox_version != KnoxVersion::kV2_3) return;
  if (device.profile.race_window_ticks <= 0) return;
  if (device.session.phase != SessionPhase::kUnlocked ||
      device.session.foreground_user != kContainerUserId) {
    return;
  }
  device.clipboard.race_until_tick =
      device.tick + static_cast<uint64_t>(device.profile.race_window_ticks);
  Log(device, "clipboard selector race window open until t" +
                  std::to_string(*device.clipboard.race_until_tick));
}

}  // namespace knoxsim

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/process.h"

namespace knoxsim {

std::string_view Name(Hook hook) {
  switch (hook) {
    case Hook::kKeystoreOverride:
      return "keystore_override";
    case Hook::kHookSsRead:
      return "hook_ss_read";
    case Hook::kSuppressSecureFlag:
      return "suppress_secure_flag";
  }
  return "?";
}

Pid ProcessTable::Spawn(Process proto) {
  proto.pid = Pid{next_pid_++};
  Pid pid = proto.pid;
  processes_.emplace(pid.value, std::move(proto));
  return pid;
}

Pid ProcessTable::ForkFromZygote(Process proto) {
  if (const Process* zygote = Find("zygote"); zygote && zygote->injected) {
    proto.injected = true;
  }
  return Spawn(std::move(proto));
}

Process* ProcessTable::Get(Pid pid) {
  auto it = processes_.find(pid.value);
  return it == processes_.end() ? nullptr : &it->second;
}

const Process* ProcessTable::Get(Pid pid) const {
  auto it = processes_.find(pid.value);
  return it == processes_.end() ? nullptr : &it->second;
}

Process* ProcessTable::Find(std::string_view name) {
  for (auto& [_, p] : processes_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Process* ProcessTable::Find(std::string_view name) const {
  for (const auto& [_, p] : processes_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool ProcessTable::Kill(Pid pid) { return processes_.erase(pid.value) > 0; }

void ProcessTable::Clear() {
  processes_.clear();
  next_pid_ = 1;
}

std::vector<const Process*> ProcessTable::VisibleTo(Pid caller) const {
  std::vector<const Process*> out;
  const Process* self = Get(caller);
  const bool privileged =
      self && (self->uid_class == UidClass::kSystem ||
               self->uid_class == UidClass::kRoot);
  const bool in_container = self && self->env == Env::kContainer;
  for (const auto& [_, p] : processes_) {
    if (p.env == Env::kContainer && !privileged && !in_container) continue;
    out.push_back(&p);
  }
  return out;
}

}  // namespace knoxsim

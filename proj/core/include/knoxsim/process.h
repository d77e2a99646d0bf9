// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef KNOXSIM_PROCESS_H_
#define KNOXSIM_PROCESS_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/common.h"

namespace knoxsim {

// Behavior an injected attacker patched into a process.
enum class Hook {
  // system_server: TIMA install/retrieve answered from a constant key.
  kKeystoreOverride,
  // vold: ssRead hooked to grab the decrypted EDK payload.
  kHookSsRead,
  // container apps: windows never get the secure flag.
  kSuppressSecureFlag,
};

std::string_view Name(Hook hook);

struct Process {
  Pid pid;
  std::string name;
  int user_id = kOwnerUserId;
  // SELinux context, e.g. "untrusted_app", "container", "system_server".
  std::string label;
  // MLS category; 2.3 separates container users this way.
  std::string category;
  UidClass uid_class = UidClass::kUntrusted;
  Env env = Env::kUser;
  // Package for app processes.
  std::string package;
  bool injected = false;
  std::set<Hook> hooks;
  // vold only: inside a legitimate mount request.
  bool mounting = false;
};

class ProcessTable {
 public:
  Pid Spawn(Process proto);

  // Clones a zygote child. Inherits the zygote's injection state.
  Pid ForkFromZygote(Process proto);

  Process* Get(Pid pid);
  const Process* Get(Pid pid) const;
  // First live process with this name.
  Process* Find(std::string_view name);
  const Process* Find(std::string_view name) const;

  bool Kill(Pid pid);
  void Clear();

  // What `caller` sees when it lists processes. Container processes are
  // hidden from everything outside the container except system and root.
  std::vector<const Process*> VisibleTo(Pid caller) const;

  const std::map<int, Process>& all() const { return processes_; }

 private:
  std::map<int, Process> processes_;
  int next_pid_ = 1;
};

}  // namespace knoxsim

#endif  // KNOXSIM_PROCESS_H_

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef KNOXSIM_EXPOSURE_H_
#define KNOXSIM_EXPOSURE_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knoxsim/bytes.h"

namespace knoxsim {

enum class SecretKind { kPassword, kTimaKey, kEcryptfsKey, kDek, kKeystroke, kClipText };

std::string_view Name(SecretKind kind);

// One plaintext secret observed in a normal-world process's memory.
struct ExposureEntry {
  SecretKind kind;
  std::string process;
  uint64_t tick = 0;
  Bytes value;
  // Cleared on power loss. The entry itself stays as history.
  bool resident = true;
};

// Append-only record of which process held which secret and when. Attack
// scenarios read secrets out of it only through the two attacker views.
class ExposureLedger {
 public:
  void Record(SecretKind kind, std::string process, uint64_t tick, Bytes value);

  // RAM is gone: no entry remains readable from memory.
  void DropResidency();

  const std::vector<ExposureEntry>& entries() const { return entries_; }

  // Everything a code-injection foothold in `process` can see.
  std::vector<ExposureEntry> VisibleToInjection(std::string_view process) const;
  // Everything a root attacker can scrape from process memory.
  std::vector<ExposureEntry> VisibleToRoot() const;

  // Distinct (kind, process) pairs across all history.
  std::set<std::pair<SecretKind, std::string>> Holders() const;

 private:
  std::vector<ExposureEntry> entries_;
};

}  // namespace knoxsim

#endif  // KNOXSIM_EXPOSURE_H_

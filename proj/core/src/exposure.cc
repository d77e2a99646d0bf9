// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/exposure.h"

namespace knoxsim {

std::string_view Name(SecretKind kind) {
  switch (kind) {
    case SecretKind::kPassword:
      return "Password";
    case SecretKind::kTimaKey:
      return "TimaKey";
    case SecretKind::kEcryptfsKey:
      return "EcryptfsKey";
    case SecretKind::kDek:
      return "DEK";
    case SecretKind::kKeystroke:
      return "Keystroke";
    case SecretKind::kClipText:
      return "ClipText";
  }
  return "?";
}

void ExposureLedger::Record(SecretKind kind, std::string process, uint64_t tick,
                            Bytes value) {
  entries_.push_back(ExposureEntry{kind, std::move(process), tick,
                                   std::move(value), /*resident=*/true});
}

void ExposureLedger::DropResidency() {
  for (auto& entry : entries_) entry.resident = false;
}

std::vector<ExposureEntry> ExposureLedger::VisibleToInjection(
    std::string_view process) const {
  std::vector<ExposureEntry> out;
  for (const auto& entry : entries_) {
    if (entry.resident && entry.process == process) out.push_back(entry);
  }
  return out;
}

std::vector<ExposureEntry> ExposureLedger::VisibleToRoot() const {
  std::vector<ExposureEntry> out;
  for (const auto& entry : entries_) {
    if (entry.resident) out.push_back(entry);
  }
  return out;
}

std::set<std::pair<SecretKind, std::string>> ExposureLedger::Holders() const {
  std::set<std::pair<SecretKind, std::string>> out;
  for (const auto& entry : entries_) out.emplace(entry.kind, entry.process);
  return out;
}

}  // namespace knoxsim

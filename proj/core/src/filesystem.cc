// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/filesystem.h"

namespace knoxsim {

std::string_view Name(FsError error) {
  return error == FsError::kNoSuchFile ? "NoSuchFile" : "PermissionDenied";
}

void SimFileSystem::Write(const std::string& path, Bytes data,
                          FileAccess access) {
  files_[path] = Entry{std::move(data), access};
}

Result<Bytes, FsError> SimFileSystem::Read(const std::string& path,
                                           UidClass reader) const {
  auto it = files_.find(path);
  if (it == files_.end()) return Fail(FsError::kNoSuchFile);
  bool allowed = false;
  switch (it->second.access) {
    case FileAccess::kWorldReadable:
      allowed = true;
      break;
    case FileAccess::kSystem:
      allowed = reader == UidClass::kSystem || reader == UidClass::kRoot;
      break;
    case FileAccess::kRootOnly:
      allowed = reader == UidClass::kRoot;
      break;
  }
  if (!allowed) return Fail(FsError::kPermissionDenied);
  return it->second.data;
}

bool SimFileSystem::Exists(const std::string& path) const {
  return files_.contains(path);
}

bool SimFileSystem::Remove(const std::string& path) {
  return files_.erase(path) > 0;
}

std::vector<std::string> SimFileSystem::List(std::string_view prefix) const {
  std::vector<std::string> out;
  for (auto it = files_.lower_bound(prefix); it != files_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back(it->first);
  }
  return out;
}

}  // namespace knoxsim

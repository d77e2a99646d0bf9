// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef KNOXSIM_FILESYSTEM_H_
#define KNOXSIM_FILESYSTEM_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/bytes.h"
#include "knoxsim/common.h"
#include "knoxsim/result.h"

namespace knoxsim {

// Who may read a persisted path.
enum class FileAccess { kWorldReadable, kSystem, kRootOnly };

enum class FsError { kNoSuchFile, kPermissionDenied };

std::string_view Name(FsError error);

// String-keyed persistent namespace for /data and /storage. Survives power
// cycles; nothing here is a real filesystem.
class SimFileSystem {
 public:
  void Write(const std::string& path, Bytes data, FileAccess access);
  Result<Bytes, FsError> Read(const std::string& path, UidClass reader) const;
  bool Exists(const std::string& path) const;
  bool Remove(const std::string& path);
  // Paths that start with `prefix`, in lexical order.
  std::vector<std::string> List(std::string_view prefix) const;

 private:
  struct Entry {
    Bytes data;
    FileAccess access;
  };
  std::map<std::string, Entry, std::less<>> files_;
};

}  // namespace knoxsim

#endif  // KNOXSIM_FILESYSTEM_H_

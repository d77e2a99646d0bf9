// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/common.h"

namespace knoxsim {

std::string_view Name(KnoxVersion version) {
  switch (version) {
    case KnoxVersion::kV1_0:
      return "1.0";
    case KnoxVersion::kV2_3:
      return "2.3";
  }
  return "?";
}

std::string_view Name(Env env) {
  return env == Env::kUser ? "user" : "container";
}

std::string_view Name(UidClass uid) {
  switch (uid) {
    case UidClass::kSystem:
      return "system";
    case UidClass::kShell:
      return "shell";
    case UidClass::kUntrusted:
      return "untrusted";
    case UidClass::kRoot:
      return "root";
  }
  return "?";
}

}  // namespace knoxsim

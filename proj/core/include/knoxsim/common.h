// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Vocabulary types shared by every module.

#ifndef KNOXSIM_COMMON_H_
#define KNOXSIM_COMMON_H_

#include <compare>
#include <cstdint>
#include <string_view>

namespace knoxsim {

enum class KnoxVersion { kV1_0, kV2_3 };

// Which side of the container boundary something belongs to.
enum class Env { kUser, kContainer };

// Coarse Linux identity of a simulated process.
enum class UidClass { kSystem, kShell, kUntrusted, kRoot };

struct Pid {
  int value = 0;
  auto operator<=>(const Pid&) const = default;
};

// The only container id KNOX 1.0 and 2.3 ship with.
inline constexpr int kContainerId = 1;
// Android user id assigned to the container in 2.3 multi-user mode.
inline constexpr int kContainerUserId = 100;
inline constexpr int kOwnerUserId = 0;

std::string_view Name(KnoxVersion version);
std::string_view Name(Env env);
std::string_view Name(UidClass uid);

}  // namespace knoxsim

#endif  // KNOXSIM_COMMON_H_

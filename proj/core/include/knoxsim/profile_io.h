// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// JSON form of DeviceProfile.

#ifndef KNOXSIM_PROFILE_IO_H_
#define KNOXSIM_PROFILE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "knoxsim/result.h"
#include "knoxsim/secure_boot.h"

namespace knoxsim {

struct IoError {
  std::string message;
};

nlohmann::ordered_json ProfileToJson(const DeviceProfile& profile);

// Parses and validates. Hashes and the attestation key must match what this
// build derives for the model and device id.
Result<DeviceProfile, IoError> ProfileFromJson(const nlohmann::json& json);
Result<DeviceProfile, IoError> ParseProfile(std::string_view text);
Result<DeviceProfile, IoError> LoadProfile(const std::filesystem::path& path);

Result<std::string, IoError> ReadTextFile(const std::filesystem::path& path);
Status<IoError> WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace knoxsim

#endif  // KNOXSIM_PROFILE_IO_H_

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// The knoxsim command line: run, demo, list-scenarios.

#ifndef KNOXSIM_TOOLS_CLI_H_
#define KNOXSIM_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace knoxsim::cli {

inline constexpr uint64_t kDefaultSeed = 42;

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfigError = 2;

struct RunConfig {
  std::string profile;
  std::optional<std::string> scenario;
  std::optional<std::string> suite;
  uint64_t seed = kDefaultSeed;
  std::optional<std::string> report;
  bool verbose = false;
};

// A bare name such as "s4_knox1" or "s4_knox1.json" that is not an existing
// path resolves against the bundled profile directory.
std::filesystem::path ResolveProfilePath(const std::string& profile);

int CmdRun(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdDemo(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdListScenarios(std::ostream& out);

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace knoxsim::cli

#endif  // KNOXSIM_TOOLS_CLI_H_

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Scenario suites and report documents.
//
// Suite: {"name": ..., "entries": [{"scenario", "profile", "capabilities",
// "params", "expected": {"outcome", "reason"}}]}. An entry without "profile"
// applies to every profile. Reports carry "schema": "knoxsim.report/1".

#ifndef KNOXSIM_SUITE_IO_H_
#define KNOXSIM_SUITE_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "knoxsim/harness.h"
#include "knoxsim/profile_io.h"

namespace knoxsim {

inline constexpr char kReportSchema[] = "knoxsim.report/1";

struct SuiteEntry {
  ScenarioId scenario;
  std::string profile;
  CapabilitySet capabilities;
  ScenarioParams params;
  Outcome expected;

  bool operator==(const SuiteEntry&) const = default;
};

struct Suite {
  std::string name;
  std::vector<SuiteEntry> entries;

  // Entries that apply to `profile_id`.
  std::vector<SuiteEntry> For(const std::string& profile_id) const;
};

Result<Suite, IoError> SuiteFromJson(const nlohmann::json& json);
Result<Suite, IoError> ParseSuite(std::string_view text);
Result<Suite, IoError> LoadSuite(const std::filesystem::path& path);
nlohmann::ordered_json SuiteToJson(const Suite& suite);

nlohmann::ordered_json ParamsToJson(const ScenarioParams& params);
Result<ScenarioParams, IoError> ParamsFromJson(const nlohmann::json& json);

nlohmann::ordered_json ReportToJson(const ScenarioReport& report);
Result<ScenarioReport, IoError> ReportFromJson(const nlohmann::json& json);

struct SuiteResult {
  SuiteEntry entry;
  ScenarioReport report;

  bool matched() const { return report.outcome == entry.expected; }
};

// Every applicable entry, each on a fresh device built from `profile` and
// `seed`.
std::vector<SuiteResult> RunSuite(const DeviceProfile& profile, const Suite& suite,
                                  uint64_t seed);

// Full run document: per-scenario results plus a summary block.
nlohmann::ordered_json RunDocument(const DeviceProfile& profile, uint64_t seed,
                                   const std::vector<SuiteResult>& results);

// Checks a run document's shape; returns the first problem found.
Status<IoError> ValidateRunDocument(const nlohmann::json& json);

}  // namespace knoxsim

#endif  // KNOXSIM_SUITE_IO_H_

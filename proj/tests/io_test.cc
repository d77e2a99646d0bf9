// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "knoxsim/harness.h"
#include "knoxsim/profile_io.h"
#include "knoxsim/suite_io.h"
#include "test_support.h"

namespace knoxsim {
namespace {

using nlohmann::json;
using testing::FullSuite;
using testing::Profile;
using testing::ProfilePath;

TEST(ProfileIoTest, RoundTripsEveryBundledProfile) {
  for (const char* id : {"s3_knox1", "s4_knox1", "note3_knox23", "hardened"}) {
    DeviceProfile p = Profile(id);
    auto again = ParseProfile(ProfileToJson(p).dump());
    ASSERT_TRUE(again.ok()) << again.error().message;
    EXPECT_EQ(*again, p);
    EXPECT_EQ(ProfileToJson(*again).dump(2) + "\n", *ReadTextFile(ProfilePath(id)));
  }
}

TEST(ProfileIoTest, RejectsBrokenDocuments) {
  json good = json::parse(*ReadTextFile(ProfilePath("s4_knox1")));
  EXPECT_TRUE(ProfileFromJson(good).ok());

  auto with = [&](const std::string& key, json value) {
    json j = good;
    j[key] = std::move(value);
    return ProfileFromJson(j);
  };
  EXPECT_FALSE(with("knox_version", "3.0").ok());
  EXPECT_FALSE(with("keystore_host", "SGX").ok());
  EXPECT_FALSE(with("adb_enabled", "yes").ok());
  EXPECT_FALSE(with("adb_enabled", false).ok());
  EXPECT_FALSE(with("attestation_public_key", "zz").ok());
  EXPECT_FALSE(with("device_id", "IMEI:1").ok());
  json missing = good;
  missing.erase("model");
  EXPECT_FALSE(ProfileFromJson(missing).ok());
  EXPECT_FALSE(ParseProfile("{not json").ok());
  EXPECT_FALSE(LoadProfile("/nonexistent/profile.json").ok());
}

TEST(SuiteIoTest, BundledSuiteParsesAndRoundTrips) {
  Suite suite = FullSuite();
  EXPECT_EQ(suite.name, "full");
  EXPECT_GE(suite.entries.size(), 56u);
  auto again = ParseSuite(SuiteToJson(suite).dump());
  ASSERT_TRUE(again.ok()) << again.error().message;
  EXPECT_EQ(again->entries, suite.entries);
}

TEST(SuiteIoTest, ForFiltersByProfile) {
  Suite suite = FullSuite();
  for (const char* id : {"s3_knox1", "s4_knox1", "note3_knox23", "hardened"}) {
    auto entries = suite.For(id);
    std::set<ScenarioId> covered;
    for (const auto& e : entries) {
      EXPECT_TRUE(e.profile.empty() || e.profile == id);
      covered.insert(e.scenario);
    }
    EXPECT_EQ(covered.size(), std::size(kAllScenarios)) << id;
  }
}

TEST(SuiteIoTest, RejectsUnknownNames) {
  auto entry = [](json e) { return ParseSuite(json{{"name", "t"}, {"entries", {e}}}.dump()); };
  json ok = {{"scenario", "CVE_2016_1919"},
             {"capabilities", {"Root"}},
             {"expected", {{"outcome", "Succeeded"}, {"reason", ""}}}};
  EXPECT_TRUE(entry(ok).ok());
  json bad = ok;
  bad["scenario"] = "CVE_0000_0000";
  EXPECT_FALSE(entry(bad).ok());
  bad = ok;
  bad["capabilities"] = {"Telekinesis"};
  EXPECT_FALSE(entry(bad).ok());
  bad = ok;
  bad["expected"]["outcome"] = "Maybe";
  EXPECT_FALSE(entry(bad).ok());
  bad = ok;
  bad["params"] = {{"no_such_param", 1}};
  EXPECT_FALSE(entry(bad).ok());
}

TEST(ParamsIoTest, RoundTrip) {
  ScenarioParams p;
  p.inject_target = "keyboard_knox";
  p.read_delay_ticks = 5;
  p.power_off_before_read = true;
  p.preexisting_container = true;
  p.blacklisted = true;
  EXPECT_EQ(*ParamsFromJson(ParamsToJson(p)), p);
  EXPECT_EQ(*ParamsFromJson(ParamsToJson({})), ScenarioParams{});
}

TEST(ReportIoTest, RoundTripsEveryScenario) {
  const DeviceProfile profile = Profile("s4_knox1");
  for (ScenarioId id : kAllScenarios) {
    ScenarioReport r = RunScenario(profile, 3, id, RequiredCapabilities(id, {}));
    auto again = ReportFromJson(json::parse(ReportToJson(r).dump()));
    ASSERT_TRUE(again.ok()) << again.error().message;
    EXPECT_EQ(*again, r);
  }
}

TEST(RunDocumentTest, ValidatesAgainstSchema) {
  const DeviceProfile profile = Profile("note3_knox23");
  auto results = RunSuite(profile, FullSuite(), 42);
  json doc = json::parse(RunDocument(profile, 42, results).dump());
  ASSERT_TRUE(ValidateRunDocument(doc).ok());
  EXPECT_EQ(doc["schema"], kReportSchema);
  EXPECT_EQ(doc["summary"]["total"], results.size());
  EXPECT_EQ(doc["summary"]["mismatched"], 0);

  json broken = doc;
  broken["summary"]["matched"] = 0;
  EXPECT_FALSE(ValidateRunDocument(broken).ok());
  broken = doc;
  broken["schema"] = "knoxsim.report/0";
  EXPECT_FALSE(ValidateRunDocument(broken).ok());
  broken = doc;
  broken["results"][0].erase("trace");
  EXPECT_FALSE(ValidateRunDocument(broken).ok());
  broken = doc;
  broken["results"][0]["matched"] = "yes";
  EXPECT_FALSE(ValidateRunDocument(broken).ok());
}

TEST(RunDocumentTest, ByteIdenticalAcrossRuns) {
  for (const char* id : {"s3_knox1", "note3_knox23", "hardened"}) {
    const DeviceProfile profile = Profile(id);
    std::string a = RunDocument(profile, 9, RunSuite(profile, FullSuite(), 9)).dump(2);
    std::string b = RunDocument(profile, 9, RunSuite(profile, FullSuite(), 9)).dump(2);
    EXPECT_EQ(a, b) << id;
  }
}

TEST(FileIoTest, WriteThenRead) {
  auto path = std::filesystem::temp_directory_path() / "knoxsim_io_test.txt";
  ASSERT_TRUE(WriteTextFile(path, "hello\n").ok());
  EXPECT_EQ(*ReadTextFile(path), "hello\n");
  std::filesystem::remove(path);
  EXPECT_FALSE(ReadTextFile(path).ok());
  EXPECT_FALSE(WriteTextFile("/nonexistent-dir/x/y.txt", "x").ok());
}

}  // namespace
}  // namespace knoxsim

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cli.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "knoxsim/profile_io.h"
#include "knoxsim/suite_io.h"
#include "test_support.h"

namespace knoxsim::cli {
namespace {

using testing::ProfilePath;
using testing::SuitePath;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "knoxsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = Main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

TEST(CliRunTest, SingleScenarioSucceedsAsExpected) {
  auto r = Invoke({"run", "--profile", ProfilePath("s4_knox1").string(), "--scenario",
                   "CVE_2016_1919", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("CVE_2016_1919"), std::string::npos);
  EXPECT_NE(r.out.find("Succeeded"), std::string::npos);
}

TEST(CliRunTest, FullSuiteOnNote3) {
  auto r = Invoke({"run", "--profile", ProfilePath("note3_knox23").string(), "--suite",
                   SuitePath("full").string()});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
}

TEST(CliRunTest, BareProfileNameResolves) {
  EXPECT_EQ(Invoke({"run", "--profile", "s3_knox1", "--scenario", "ADB_BROWSER"}).code, kExitOk);
}

TEST(CliRunTest, ConfigErrorsExitTwo) {
  EXPECT_EQ(Invoke({"run", "--profile", "missing.json"}).code, kExitConfigError);
  EXPECT_EQ(Invoke({"run", "--profile", "s4_knox1", "--scenario", "NOPE"}).code,
            kExitConfigError);
  EXPECT_EQ(Invoke({"run", "--profile", "s4_knox1", "--suite", "/no/such/suite.json"}).code,
            kExitConfigError);
  EXPECT_EQ(Invoke({"run", "--profile", "s4_knox1", "--seed", "abc"}).code, kExitConfigError);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitConfigError);
  EXPECT_EQ(Invoke({"run"}).code, kExitConfigError);
}

TEST(CliRunTest, OutcomeMismatchExitsOne) {
  Suite suite = *LoadSuite(SuitePath("full"));
  std::erase_if(suite.entries, [](const SuiteEntry& e) { return e.profile != "s4_knox1"; });
  suite.entries.resize(1);
  suite.entries[0].expected = {OutcomeKind::kBlocked, "Imaginary"};
  auto path = TempPath("knoxsim_cli_mismatch.json");
  ASSERT_TRUE(WriteTextFile(path, SuiteToJson(suite).dump(2)).ok());
  auto r = Invoke({"run", "--profile", "s4_knox1", "--suite", path.string()});
  EXPECT_EQ(r.code, kExitMismatch);
  std::filesystem::remove(path);
}

TEST(CliRunTest, ReportValidatesAndIsByteIdentical) {
  auto a = TempPath("knoxsim_cli_report_a.json");
  auto b = TempPath("knoxsim_cli_report_b.json");
  for (const auto& path : {a, b}) {
    auto r = Invoke({"run", "--profile", "s4_knox1", "--suite", SuitePath("full").string(),
                     "--seed", "11", "--report", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  std::string text_a = *ReadTextFile(a);
  EXPECT_EQ(text_a, *ReadTextFile(b));
  auto doc = nlohmann::json::parse(text_a);
  EXPECT_TRUE(ValidateRunDocument(doc).ok());
  EXPECT_EQ(doc["seed"], 11);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(CliRunTest, DefaultSeedIsFixed) {
  auto path = TempPath("knoxsim_cli_seed.json");
  ASSERT_EQ(Invoke({"run", "--profile", "s3_knox1", "--scenario", "CVE_2016_1920", "--report",
                    path.string()})
                .code,
            kExitOk);
  EXPECT_EQ(nlohmann::json::parse(*ReadTextFile(path))["seed"], kDefaultSeed);
  std::filesystem::remove(path);
}

TEST(CliDemoTest, S4ShowsThreePasswordHolders) {
  auto r = Invoke({"demo", "--profile", "s4_knox1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("password held by 3 processes"), std::string::npos) << r.out;
  for (const char* p : {"keyboard", "system_server", "container_agent"}) {
    EXPECT_NE(r.out.find(p), std::string::npos) << p;
  }
}

TEST(CliDemoTest, Note3ReportsAdbDisabled) {
  auto r = Invoke({"demo", "--profile", "note3_knox23"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("AdbDisabled"), std::string::npos);
}

TEST(CliDemoTest, TranscriptIsDeterministic) {
  auto a = Invoke({"demo", "--profile", "s4_knox1", "--seed", "5"});
  auto b = Invoke({"demo", "--profile", "s4_knox1", "--seed", "5"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(Invoke({"demo", "--profile", "missing.json"}).code, kExitConfigError);
}

TEST(CliListTest, ListsAllScenarios) {
  auto r = Invoke({"list-scenarios"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* id : {"CVE_2016_1919", "DEK_EXTRACT_C", "DATA_EXFIL_V2", "HIDE_WARRANTY_BIT"}) {
    EXPECT_NE(r.out.find(id), std::string::npos) << id;
  }
}

}  // namespace
}  // namespace knoxsim::cli

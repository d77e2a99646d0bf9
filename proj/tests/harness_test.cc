// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/harness.h"

#include <gtest/gtest.h>

#include <map>

#include "knoxsim/device.h"
#include "test_support.h"

namespace knoxsim {
namespace {

using testing::FullSuite;
using testing::Profile;

using S = ScenarioId;
constexpr OutcomeKind kOk = OutcomeKind::kSucceeded;
constexpr OutcomeKind kBlk = OutcomeKind::kBlocked;
constexpr OutcomeKind kPm = OutcomeKind::kProfileMismatch;

struct Expect {
  OutcomeKind kind;
  std::string reason;
};

// Expected outcomes for every scenario at its default parameters, written
// down independently of suites/full.json.
std::map<ScenarioId, Expect> V1Table() {
  return {
      {S::kCve2016_1919, {kOk, ""}},
      {S::kCve2016_1920, {kOk, ""}},
      {S::kCve2016_3996V1, {kOk, ""}},
      {S::kCve2016_3996V2Race, {kPm, "requires 2.3"}},
      {S::kAdbBrowser, {kOk, ""}},
      {S::kAdbBroadcast, {kOk, ""}},
      {S::kVolatileMountRead, {kOk, ""}},
      {S::kDekExtractA, {kBlk, "CallerRejected"}},
      {S::kDekExtractB, {kBlk, "HookDetected"}},
      {S::kDekExtractC, {kOk, ""}},
      {S::kKeyboardSniff, {kOk, ""}},
      {S::kScreenCapture, {kOk, ""}},
      {S::kHideWarrantyBit, {kOk, ""}},
      {S::kDataExfilV2, {kPm, "requires 2.3"}},
  };
}

std::map<ScenarioId, Expect> V2Table() {
  return {
      {S::kCve2016_1919, {kBlk, "HmacMismatch"}},
      {S::kCve2016_1920, {kBlk, "UntrustedChain"}},
      {S::kCve2016_3996V1, {kBlk, "Denied"}},
      {S::kCve2016_3996V2Race, {kOk, ""}},
      {S::kAdbBrowser, {kBlk, "AdbDisabled"}},
      {S::kAdbBroadcast, {kBlk, "AdbDisabled"}},
      {S::kVolatileMountRead, {kOk, ""}},
      {S::kDekExtractA, {kBlk, "CallerRejected"}},
      {S::kDekExtractB, {kBlk, "HookDetected"}},
      {S::kDekExtractC, {kOk, ""}},
      {S::kKeyboardSniff, {kBlk, "NothingExtracted"}},
      {S::kScreenCapture, {kOk, ""}},
      {S::kHideWarrantyBit, {kOk, ""}},
      {S::kDataExfilV2, {kOk, ""}},
  };
}

ScenarioReport RunDefault(const std::string& profile, ScenarioId id, ScenarioParams params = {},
                   uint64_t seed = 42) {
  return RunScenario(Profile(profile), seed, id, RequiredCapabilities(id, params), params);
}

class MatrixTest : public ::testing::TestWithParam<std::string> {};

TEST_P(MatrixTest, DefaultParamsMatchTable) {
  const std::string profile = GetParam();
  auto table = profile == "note3_knox23" ? V2Table() : V1Table();
  for (ScenarioId id : kAllScenarios) {
    ScenarioReport r = RunDefault(profile, id);
    EXPECT_EQ(r.outcome.kind, table[id].kind) << Name(id) << " " << r.outcome.reason;
    EXPECT_EQ(r.outcome.reason, table[id].reason) << Name(id);
    if (r.outcome.kind == kOk && ScenarioDefinition(id).exfiltration) {
      EXPECT_FALSE(r.extracted.empty()) << Name(id);
    }
  }
}

TEST_P(MatrixTest, SuiteFileMatches) {
  const DeviceProfile profile = Profile(GetParam());
  for (const SuiteResult& r : RunSuite(profile, FullSuite(), 42)) {
    EXPECT_TRUE(r.matched()) << Name(r.entry.scenario) << " expected "
                             << Name(r.entry.expected.kind) << "(" << r.entry.expected.reason
                             << ") got " << Name(r.report.outcome.kind) << "("
                             << r.report.outcome.reason << ")";
  }
}

INSTANTIATE_TEST_SUITE_P(Profiles, MatrixTest,
                         ::testing::Values("s3_knox1", "s4_knox1", "note3_knox23"));

TEST(ScenarioTest, Cve1919ExtractsDekAndFile) {
  ScenarioReport r = RunDefault("s4_knox1", S::kCve2016_1919);
  ASSERT_EQ(r.outcome.kind, kOk);
  bool dek = false, file = false;
  for (const auto& e : r.extracted) {
    dek |= e.kind == "DEK";
    file |= e.value == Fixtures::kFileBody;
  }
  EXPECT_TRUE(dek);
  EXPECT_TRUE(file);
}

TEST(ScenarioTest, Cve3996V1ExtractsClip) {
  ScenarioReport r = RunDefault("s3_knox1", S::kCve2016_3996V1);
  ASSERT_EQ(r.outcome.kind, kOk);
  EXPECT_EQ(r.extracted.front().value, Fixtures::kClip);
}

TEST(ScenarioTest, RaceOnlyInsideWindow) {
  const int w = Profile("note3_knox23").race_window_ticks;
  for (uint64_t delay = 0; delay < static_cast<uint64_t>(w) + 3; ++delay) {
    ScenarioParams p;
    p.read_delay_ticks = delay;
    ScenarioReport r = RunDefault("note3_knox23", S::kCve2016_3996V2Race, p);
    EXPECT_EQ(r.outcome.kind == kOk, delay < static_cast<uint64_t>(w)) << delay;
  }
}

TEST(ScenarioTest, VolatileMountBoundedByPowerOff) {
  ScenarioParams p;
  p.power_off_before_read = true;
  for (const char* profile : {"s4_knox1", "note3_knox23"}) {
    EXPECT_EQ(RunDefault(profile, S::kVolatileMountRead, p).outcome,
              (Outcome{kBlk, "NotMounted"}));
  }
}

TEST(ScenarioTest, KeyboardSniffTargets) {
  ScenarioParams knox;
  knox.inject_target = "keyboard_knox";
  EXPECT_EQ(RunDefault("note3_knox23", S::kKeyboardSniff, knox).outcome.kind, kOk);
  ScenarioReport v1 = RunDefault("s4_knox1", S::kKeyboardSniff);
  ASSERT_EQ(v1.outcome.kind, kOk);
  bool password = false;
  for (const auto& e : v1.extracted) password |= e.value == Fixtures::kPassword;
  EXPECT_TRUE(password);
}

TEST(ScenarioTest, HideWarrantyBitFreshVersusPreexisting) {
  ScenarioParams pre;
  pre.preexisting_container = true;
  EXPECT_EQ(RunDefault("s3_knox1", S::kHideWarrantyBit, pre).outcome, (Outcome{kBlk, "HmacMismatch"}));
  DeviceState d = CreateDevice(Profile("s3_knox1"), 42);
  ScenarioReport r = RunScenario(d, S::kHideWarrantyBit,
                                 RequiredCapabilities(S::kHideWarrantyBit, {}));
  EXPECT_EQ(r.outcome.kind, kOk);
  EXPECT_TRUE(d.efuse.warranty_bit());
  EXPECT_TRUE(d.container_exists);
}

TEST(ScenarioTest, DataExfilBlacklisted) {
  ScenarioParams p;
  p.blacklisted = true;
  EXPECT_EQ(RunDefault("note3_knox23", S::kDataExfilV2, p).outcome, (Outcome{kBlk, "Blacklisted"}));
  ScenarioReport ok = RunDefault("note3_knox23", S::kDataExfilV2);
  std::set<std::string> values;
  for (const auto& e : ok.extracted) values.insert(e.value);
  for (const char* want : {Fixtures::kContact, Fixtures::kCalendar, Fixtures::kClip,
                           Fixtures::kSdcardBody}) {
    EXPECT_TRUE(values.contains(want)) << want;
  }
}

// Dropping any one required capability from a successful run must not leave
// it successful.
TEST(CapabilityTest, EachRequiredCapabilityIsNecessary) {
  for (const SuiteEntry& entry : FullSuite().entries) {
    if (entry.expected.kind != kOk) continue;
    const DeviceProfile profile = Profile(entry.profile);
    for (const Capability& drop : entry.capabilities) {
      CapabilitySet caps = entry.capabilities;
      caps.erase(drop);
      ScenarioReport r = RunScenario(profile, 42, entry.scenario, caps, entry.params);
      EXPECT_NE(r.outcome.kind, kOk) << Name(entry.scenario) << " without " << ToString(drop);
      EXPECT_TRUE(r.outcome.kind == OutcomeKind::kMissingCapability || r.outcome.kind == kBlk);
    }
  }
}

TEST(CapabilityTest, MissingCapabilityIsReportedByName) {
  ScenarioReport r = RunScenario(Profile("s4_knox1"), 42, S::kDekExtractC, {});
  EXPECT_EQ(r.outcome.kind, OutcomeKind::kMissingCapability);
  EXPECT_NE(r.outcome.reason.find("CodeInjection(vold)"), std::string::npos);
}

TEST(CapabilityTest, ParseRoundTrip) {
  for (ScenarioId id : kAllScenarios) {
    for (const Capability& c : RequiredCapabilities(id, {})) {
      EXPECT_EQ(*ParseCapability(ToString(c)), c);
    }
    EXPECT_EQ(*ParseScenarioId(Name(id)), id);
  }
  EXPECT_FALSE(ParseCapability("CodeInjection()").has_value());
  EXPECT_FALSE(ParseCapability("Telepathy").has_value());
  EXPECT_EQ(ParseCapability("CodeInjection(vold)")->process, "vold");
}

TEST(HardenedTest, EveryScenarioClosed) {
  const DeviceProfile profile = Profile("hardened");
  for (ScenarioId id : kAllScenarios) {
    ScenarioReport r = RunScenario(profile, 42, id, RequiredCapabilities(id, {}));
    EXPECT_TRUE(r.outcome.kind == kBlk || r.outcome.kind == OutcomeKind::kMissingCapability)
        << Name(id) << " " << Name(r.outcome.kind) << " " << r.outcome.reason;
  }
}

TEST(HardenedTest, ClosedEvenWithEveryCapability) {
  const DeviceProfile profile = Profile("hardened");
  CapabilitySet all;
  for (ScenarioId id : kAllScenarios) {
    for (const Capability& c : RequiredCapabilities(id, {})) all.insert(c);
  }
  all.insert({CapabilityKind::kCodeInjection, "keyboard_knox"});
  for (ScenarioId id : kAllScenarios) {
    EXPECT_EQ(RunScenario(profile, 42, id, all).outcome.kind, kBlk) << Name(id);
  }
}

TEST(ReplayTest, ReportsReplayBitExactly) {
  for (ScenarioId id : kAllScenarios) {
    ScenarioReport r = RunDefault("s4_knox1", id, {}, 7);
    auto again = ReplayTrace(r, Profile("s4_knox1"), 7);
    ASSERT_TRUE(again.ok()) << Name(id);
    EXPECT_EQ(*again, r);
  }
}

TEST(ReplayTest, WrongSeedOrTamperedTraceFlagged) {
  ScenarioReport r = RunDefault("s4_knox1", S::kCve2016_1919, {}, 7);
  EXPECT_EQ(ReplayTrace(r, Profile("s4_knox1"), 8).error(), ReplayError::kSeedMismatch);
  EXPECT_EQ(ReplayTrace(r, Profile("s3_knox1"), 7).error(), ReplayError::kProfileMismatch);
  ScenarioReport tampered = r;
  tampered.trace[tampered.trace.size() / 2] += " (edited)";
  EXPECT_EQ(ReplayTrace(tampered, Profile("s4_knox1"), 7).error(), ReplayError::kDivergence);
  tampered = r;
  tampered.extracted.pop_back();
  EXPECT_EQ(ReplayTrace(tampered, Profile("s4_knox1"), 7).error(), ReplayError::kDivergence);
}

// Outcomes never depend on the seed; secret values may.
TEST(ReplayTest, OutcomesStableAcrossTenSeeds) {
  for (const char* profile : {"s4_knox1", "note3_knox23"}) {
    for (ScenarioId id : kAllScenarios) {
      const Outcome first = RunDefault(profile, id, {}, 1).outcome;
      for (uint64_t seed = 2; seed <= 10; ++seed) {
        ASSERT_EQ(RunDefault(profile, id, {}, seed).outcome, first) << profile << " " << Name(id);
      }
    }
  }
}

TEST(ReplayTest, SecretValuesVaryWithSeed) {
  ScenarioReport a = RunDefault("s4_knox1", S::kDekExtractC, {}, 1);
  ScenarioReport b = RunDefault("s4_knox1", S::kDekExtractC, {}, 2);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_NE(a.extracted, b.extracted);
}

// --- brute force -----------------------------------------------------------

struct Victim {
  Key256 tima;
  SealedDek sealed;
};

Victim SealV1(const std::string& password, uint64_t seed) {
  DeterministicRng rng(seed);
  Victim v{rng.NextArray<32>(), {}};
  v.sealed = SealDek(*DeriveEcryptfsKeyV1(password, v.tima), rng);
  return v;
}

BruteForceConfig Exact(size_t length, uint64_t budget = 1'000'000) {
  BruteForceConfig c;
  c.min_len = length;
  c.max_len = length;
  c.budget = budget;
  return c;
}

TEST(BruteForceTest, CandidateCountFormula) {
  EXPECT_EQ(CandidateCount(10, 7), 1u);
  EXPECT_EQ(CandidateCount(10, 8), 1u);
  EXPECT_EQ(CandidateCount(10, 9), 10u);
  EXPECT_EQ(CandidateCount(10, 10), 100u);
  EXPECT_EQ(CandidateCount(62, 12), 62u * 62 * 62 * 62);
}

TEST(BruteForceTest, ShortPasswordsFallOnFirstCandidate) {
  for (const char* pw : {"8675309", "hunter77", "00000000"}) {
    Victim v = SealV1(pw, 3);
    auto hit = BruteForceKeyOracle(v.sealed.payload, v.tima, Exact(std::string(pw).size()));
    ASSERT_TRUE(hit.ok()) << pw;
    EXPECT_EQ(hit->candidates_tried, 1u);
    EXPECT_EQ(*UnsealDek(v.sealed.payload, hit->key), v.sealed.dek);
  }
}

TEST(BruteForceTest, NineCharsWithinTenCandidates) {
  for (char lead = '0'; lead <= '9'; ++lead) {
    std::string pw = std::string(1, lead) + "31415926";
    Victim v = SealV1(pw, 4);
    auto hit = BruteForceKeyOracle(v.sealed.payload, v.tima, Exact(9));
    ASSERT_TRUE(hit.ok()) << pw;
    EXPECT_EQ(hit->candidates_tried, static_cast<uint64_t>(lead - '0') + 1);
    EXPECT_EQ(hit->password[0], lead);
    EXPECT_EQ(*UnsealDek(v.sealed.payload, hit->key), v.sealed.dek);
  }
}

// Exhausting a length against a payload no v1 key opens counts exactly the
// structural candidates.
TEST(BruteForceTest, ExhaustiveCountsMatchFormula) {
  DeterministicRng rng(5);
  Key256 tima = rng.NextArray<32>();
  SealedDek v2 = SealDek(*DeriveEcryptfsKeyV2("hunter77", tima), rng);
  for (size_t len : {7u, 8u, 9u, 10u}) {
    auto miss = BruteForceKeyOracle(v2.payload, tima, Exact(len));
    ASSERT_FALSE(miss.ok());
    EXPECT_EQ(miss.error().candidates_tried, CandidateCount(10, len)) << len;
  }
}

TEST(BruteForceTest, TenCharsWithinHundred) {
  Victim v = SealV1("9912345678", 6);
  auto hit = BruteForceKeyOracle(v.sealed.payload, v.tima, Exact(10));
  ASSERT_TRUE(hit.ok());
  EXPECT_EQ(hit->candidates_tried, 100u);
  EXPECT_EQ(hit->password.substr(0, 2), "99");
}

TEST(BruteForceTest, V2SurvivesSmallBudget) {
  DeterministicRng rng(7);
  Key256 tima = rng.NextArray<32>();
  SealedDek v2 = SealDek(*DeriveEcryptfsKeyV2("1234567", tima), rng);
  BruteForceConfig c = Exact(12, 500);
  auto miss = BruteForceKeyOracle(v2.payload, tima, c);
  ASSERT_FALSE(miss.ok());
  EXPECT_EQ(miss.error().candidates_tried, 500u);
}

TEST(BruteForceTest, WorkerCountDoesNotChangeResult) {
  Victim v = SealV1("5512345678", 8);
  BruteForceConfig one = Exact(10);
  one.threads = 1;
  BruteForceConfig four = Exact(10);
  four.threads = 4;
  auto a = BruteForceKeyOracle(v.sealed.payload, v.tima, one);
  auto b = BruteForceKeyOracle(v.sealed.payload, v.tima, four);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->candidates_tried, b->candidates_tried);
  EXPECT_EQ(a->key, b->key);
}

// --- isolation fuzzing -----------------------------------------------------

TEST(IsolationFuzzTest, NoLeaksOnNote3WithRaceClosed) {
  DeviceProfile p = Profile("note3_knox23");
  p.race_window_ticks = 0;
  FuzzResult r = IsolationFuzz(p, 42, 2000);
  EXPECT_EQ(r.calls, 2000u);
  EXPECT_TRUE(r.leaks.empty()) << r.leaks.front();
}

// Positive control: the same fuzzer does find the 1.0 clipboard hole.
TEST(IsolationFuzzTest, FindsLeaksOnV1) {
  FuzzResult r = IsolationFuzz(Profile("s4_knox1"), 42, 2000);
  EXPECT_FALSE(r.leaks.empty());
}

}  // namespace
}  // namespace knoxsim

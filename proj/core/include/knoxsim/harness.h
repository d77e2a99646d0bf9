// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Attack scenarios as capability-gated step tables, the runner that executes
// them against a fresh device, and the offline key-search oracle.

#ifndef KNOXSIM_HARNESS_H_
#define KNOXSIM_HARNESS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knoxsim/common.h"
#include "knoxsim/container_crypto.h"
#include "knoxsim/process.h"
#include "knoxsim/result.h"
#include "knoxsim/secure_boot.h"

namespace knoxsim {

struct DeviceState;

enum class CapabilityKind {
  kInstallUserApp,
  kUiInteraction,
  kShellViaAdb,
  kRoot,
  kCodeInjection,
  kPhysicalFlash,
};

std::string_view Name(CapabilityKind kind);

struct Capability {
  CapabilityKind kind;
  // Target process, CodeInjection only.
  std::string process;

  auto operator<=>(const Capability&) const = default;
};

using CapabilitySet = std::set<Capability>;

// "Root", "CodeInjection(vold)".
std::string ToString(const Capability& capability);
std::optional<Capability> ParseCapability(std::string_view text);

enum class ScenarioId {
  kCve2016_1919,
  kCve2016_1920,
  kCve2016_3996V1,
  kCve2016_3996V2Race,
  kAdbBrowser,
  kAdbBroadcast,
  kVolatileMountRead,
  kDekExtractA,
  kDekExtractB,
  kDekExtractC,
  kKeyboardSniff,
  kScreenCapture,
  kHideWarrantyBit,
  kDataExfilV2,
};

inline constexpr ScenarioId kAllScenarios[] = {
    ScenarioId::kCve2016_1919,      ScenarioId::kCve2016_1920,
    ScenarioId::kCve2016_3996V1,    ScenarioId::kCve2016_3996V2Race,
    ScenarioId::kAdbBrowser,        ScenarioId::kAdbBroadcast,
    ScenarioId::kVolatileMountRead, ScenarioId::kDekExtractA,
    ScenarioId::kDekExtractB,       ScenarioId::kDekExtractC,
    ScenarioId::kKeyboardSniff,     ScenarioId::kScreenCapture,
    ScenarioId::kHideWarrantyBit,   ScenarioId::kDataExfilV2,
};

// "CVE_2016_1919", "DEK_EXTRACT_A", ...
std::string_view Name(ScenarioId id);
std::optional<ScenarioId> ParseScenarioId(std::string_view text);

// Per-run knobs for scenario variants.
struct ScenarioParams {
  // CodeInjection target for KEYBOARD_SNIFF; other scenarios fix theirs.
  std::string inject_target;
  // CVE_2016_3996_V2_RACE: ticks between the activity launch and the read.
  uint64_t read_delay_ticks = 0;
  // VOLATILE_MOUNT_READ: the victim powers the phone off before the read.
  bool power_off_before_read = false;
  // HIDE_WARRANTY_BIT: a container was already active before rooting.
  bool preexisting_container = false;
  // DATA_EXFIL_V2: the administrator blacklisted the attacker's package.
  bool blacklisted = false;

  bool operator==(const ScenarioParams&) const = default;
};

enum class StepOp {
  // Victim and environment events.
  kVictimSetup,
  kVictimLogin,
  kVictimLock,
  kVictimType,
  kVictimCreate,
  kReboot,
  kPowerCycle,
  kAdvanceDelay,
  kBlacklistPayload,
  // Attacker actions.
  kInstallUserApp,
  kInstallUserCa,
  kRegisterVpn,
  kInterceptContainerTls,
  kClipboardUpdateDb,
  kClipboardRead,
  kLaunchUserActivity,
  kAdbStartBrowser,
  kAdbBroadcastSearchEngine,
  kFlashRootedFirmware,
  kAcquireRoot,
  kInjectCode,
  kRetrieveTimaKey,
  kDeriveGuessedKey,
  kVoldMountAsRoot,
  kReadContainerFileAsRoot,
  kScrapeDekAsRoot,
  kSecureStorageDecryptAsRoot,
  kReadInjectedMemory,
  kCaptureScreen,
  kInstallContainerApp,
  kUpdateContainerApp,
  kHarvestContainerData,
  kConfirmContainerEnabled,
};

std::string_view Name(StepOp op);

enum class StepCondition {
  kAlways,
  kIfPowerOff,
  kIfPreexisting,
  kIfFresh,
  kIfBlacklisted,
};

// Marks the CodeInjection target as taken from ScenarioParams.
inline constexpr char kParamTarget[] = "$target";

struct Step {
  StepOp op;
  std::optional<Capability> gate;
  StepCondition when = StepCondition::kAlways;
  // Installed by kInjectCode.
  std::optional<Hook> hook;
};

struct ScenarioDef {
  ScenarioId id;
  std::set<KnoxVersion> versions;
  // Succeeded additionally needs at least one planted secret recovered.
  bool exfiltration = true;
  // Defaults applied when the caller leaves a param unset.
  ScenarioParams defaults;
  std::vector<Step> steps;
};

const ScenarioDef& ScenarioDefinition(ScenarioId id);

bool StepApplies(const Step& step, const ScenarioParams& params);

// Union of step gates after params substitution, skipping steps whose
// condition is false.
CapabilitySet RequiredCapabilities(ScenarioId id, const ScenarioParams& params);

// Fills unset params from the scenario defaults.
ScenarioParams ResolveParams(ScenarioId id, ScenarioParams params);

enum class OutcomeKind { kSucceeded, kBlocked, kMissingCapability, kProfileMismatch };

std::string_view Name(OutcomeKind kind);
std::optional<OutcomeKind> ParseOutcomeKind(std::string_view text);

struct Outcome {
  OutcomeKind kind = OutcomeKind::kSucceeded;
  std::string reason;

  bool operator==(const Outcome&) const = default;
};

struct Extracted {
  std::string kind;
  std::string value;

  bool operator==(const Extracted&) const = default;
};

struct ScenarioReport {
  ScenarioId scenario;
  std::string profile;
  uint64_t seed = 0;
  CapabilitySet capabilities;
  ScenarioParams params;
  Outcome outcome;
  std::vector<Extracted> extracted;
  std::vector<std::string> trace;

  bool operator==(const ScenarioReport&) const = default;
};

// Victim data the scenarios try to steal.
struct Fixtures {
  static constexpr char kPassword[] = "hunter77";
  static constexpr char kClip[] = "C0NF1D3NT1AL";
  static constexpr char kFileName[] = "notes/merger.txt";
  static constexpr char kFileBody[] = "Q3 merger term sheet: strike 41.20";
  static constexpr char kSdcardName[] = "DCIM/board_minutes.pdf";
  static constexpr char kSdcardBody[] = "board minutes, restricted";
  static constexpr char kContact[] = "Dana Whitfield +1-555-0142";
  static constexpr char kCalendar[] = "Acquisition call 09:00";
  static constexpr char kTlsPayload[] = "POST /owa/auth user=dana pass=Tr0ub4dor";
  static constexpr char kTypedMessage[] = "wire 2M to escrow today";
};

// Runs one scenario on `device`, which must be freshly created. The device
// keeps every side effect (mounts, reboots, fuse).
ScenarioReport RunScenario(DeviceState& device, ScenarioId id,
                           const CapabilitySet& capabilities,
                           ScenarioParams params = {});

// Creates the device from `profile` and `seed`, then runs.
ScenarioReport RunScenario(const DeviceProfile& profile, uint64_t seed,
                           ScenarioId id, const CapabilitySet& capabilities,
                           ScenarioParams params = {});

enum class ReplayError { kSeedMismatch, kProfileMismatch, kDivergence };

std::string_view Name(ReplayError error);

// Re-executes the report's scenario and checks the result is identical.
Result<ScenarioReport, ReplayError> ReplayTrace(const ScenarioReport& report,
                                                const DeviceProfile& profile,
                                                uint64_t seed);

struct BruteForceConfig {
  std::string charset = "0123456789";
  size_t min_len = kMinPasswordLength;
  size_t max_len = 8;
  uint64_t budget = 1'000'000;
  // 0: one worker per hardware thread.
  unsigned threads = 0;
};

struct BruteForceHit {
  EcryptfsKey key;
  std::string password;
  uint64_t candidates_tried;
};

struct BruteForceMiss {
  uint64_t candidates_tried;
};

// Number of distinct v1 candidates for passwords of exactly `length` chars.
uint64_t CandidateCount(size_t charset_size, size_t length);

// Searches v1-derived keys that open `payload`. Candidates of one length only
// vary in the characters that reach the key; all lengths up to 8 collapse to
// a single candidate. The first hit in enumeration order wins.
Result<BruteForceHit, BruteForceMiss> BruteForceKeyOracle(
    const EdkPayload& payload, const Key256& tima_key,
    const BruteForceConfig& config);

// Random service calls from an attacker holding only InstallUserApp,
// interleaved with victim activity. Returns planted container secrets seen.
struct FuzzResult {
  uint64_t calls = 0;
  std::vector<std::string> leaks;
};

FuzzResult IsolationFuzz(const DeviceProfile& profile, uint64_t seed,
                         uint64_t calls);

}  // namespace knoxsim

#endif  // KNOXSIM_HARNESS_H_

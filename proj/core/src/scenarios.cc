// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// The attack catalog. Each scenario is a list of steps over the service
// layer; adding an attack means adding a table entry.

#include <array>
#include <map>

#include "knoxsim/harness.h"

namespace knoxsim {
namespace {

constexpr std::array<std::pair<CapabilityKind, std::string_view>, 6> kCapabilityNames = {{
    {CapabilityKind::kInstallUserApp, "InstallUserApp"},
    {CapabilityKind::kUiInteraction, "UiInteraction"},
    {CapabilityKind::kShellViaAdb, "ShellViaAdb"},
    {CapabilityKind::kRoot, "Root"},
    {CapabilityKind::kCodeInjection, "CodeInjection"},
    {CapabilityKind::kPhysicalFlash, "PhysicalFlash"},
}};

constexpr std::array<std::pair<ScenarioId, std::string_view>, 14> kScenarioNames = {{
    {ScenarioId::kCve2016_1919, "CVE_2016_1919"},
    {ScenarioId::kCve2016_1920, "CVE_2016_1920"},
    {ScenarioId::kCve2016_3996V1, "CVE_2016_3996_V1"},
    {ScenarioId::kCve2016_3996V2Race, "CVE_2016_3996_V2_RACE"},
    {ScenarioId::kAdbBrowser, "ADB_BROWSER"},
    {ScenarioId::kAdbBroadcast, "ADB_BROADCAST"},
    {ScenarioId::kVolatileMountRead, "VOLATILE_MOUNT_READ"},
    {ScenarioId::kDekExtractA, "DEK_EXTRACT_A"},
    {ScenarioId::kDekExtractB, "DEK_EXTRACT_B"},
    {ScenarioId::kDekExtractC, "DEK_EXTRACT_C"},
    {ScenarioId::kKeyboardSniff, "KEYBOARD_SNIFF"},
    {ScenarioId::kScreenCapture, "SCREEN_CAPTURE"},
    {ScenarioId::kHideWarrantyBit, "HIDE_WARRANTY_BIT"},
    {ScenarioId::kDataExfilV2, "DATA_EXFIL_V2"},
}};

constexpr std::array<std::pair<OutcomeKind, std::string_view>, 4> kOutcomeNames = {{
    {OutcomeKind::kSucceeded, "Succeeded"},
    {OutcomeKind::kBlocked, "Blocked"},
    {OutcomeKind::kMissingCapability, "MissingCapability"},
    {OutcomeKind::kProfileMismatch, "ProfileMismatch"},
}};

Capability Cap(CapabilityKind kind) { return {kind, ""}; }
Capability Inject(std::string process) {
  return {CapabilityKind::kCodeInjection, std::move(process)};
}

const std::set<KnoxVersion> kAnyVersion = {KnoxVersion::kV1_0, KnoxVersion::kV2_3};
const std::set<KnoxVersion> kV2Only = {KnoxVersion::kV2_3};

std::map<ScenarioId, ScenarioDef> BuildCatalog() {
  const auto app = Cap(CapabilityKind::kInstallUserApp);
  const auto ui = Cap(CapabilityKind::kUiInteraction);
  const auto adb = Cap(CapabilityKind::kShellViaAdb);
  const auto root = Cap(CapabilityKind::kRoot);
  const auto flash = Cap(CapabilityKind::kPhysicalFlash);
  using enum StepOp;
  using C = StepCondition;

  std::vector<ScenarioDef> defs = {
      {ScenarioId::kCve2016_1919, kAnyVersion, true, {},
       {{kVictimSetup},
        {kReboot},
        {kAcquireRoot, root},
        {kRetrieveTimaKey, root},
        {kDeriveGuessedKey},
        {kVoldMountAsRoot, root},
        {kReadContainerFileAsRoot, root},
        {kScrapeDekAsRoot, root}}},
      {ScenarioId::kCve2016_1920, kAnyVersion, true, {},
       {{kVictimSetup},
        {kInstallUserApp, app},
        {kInstallUserCa, ui},
        {kRegisterVpn, ui},
        {kInterceptContainerTls}}},
      {ScenarioId::kCve2016_3996V1, kAnyVersion, true, {},
       {{kVictimSetup},
        {kInstallUserApp, app},
        {kClipboardUpdateDb, app},
        {kClipboardRead, app}}},
      {ScenarioId::kCve2016_3996V2Race, kV2Only, true, {},
       {{kVictimSetup},
        {kInstallUserApp, app},
        {kVictimLogin},
        {kLaunchUserActivity, app},
        {kAdvanceDelay},
        {kClipboardRead, app}}},
      {ScenarioId::kAdbBrowser, kAnyVersion, false, {},
       {{kVictimSetup}, {kVictimLogin}, {kAdbStartBrowser, adb}}},
      {ScenarioId::kAdbBroadcast, kAnyVersion, false, {},
       {{kVictimSetup}, {kVictimLogin}, {kAdbBroadcastSearchEngine, adb}}},
      {ScenarioId::kVolatileMountRead, kAnyVersion, true, {},
       {{kVictimSetup},
        {kPowerCycle, std::nullopt, C::kIfPowerOff},
        {kAcquireRoot, root},
        {kReadContainerFileAsRoot, root}}},
      {ScenarioId::kDekExtractA, kAnyVersion, true, {},
       {{kVictimSetup}, {kAcquireRoot, root}, {kSecureStorageDecryptAsRoot, root}}},
      {ScenarioId::kDekExtractB, kAnyVersion, true, {},
       {{kVictimSetup},
        {kReboot},
        {kAcquireRoot, root},
        {kInjectCode, Inject("vold"), C::kAlways, Hook::kHookSsRead},
        {kVictimLogin},
        {kReadInjectedMemory, Inject("vold")}}},
      {ScenarioId::kDekExtractC, kAnyVersion, true, {},
       {{kVictimSetup},
        {kReboot},
        {kAcquireRoot, root},
        {kInjectCode, Inject("vold")},
        {kVictimLogin},
        {kReadInjectedMemory, Inject("vold")}}},
      {ScenarioId::kKeyboardSniff, kAnyVersion, true, {.inject_target = "keyboard"},
       {{kVictimSetup},
        {kReboot},
        {kAcquireRoot, root},
        {kInjectCode, Inject(kParamTarget)},
        {kVictimLogin},
        {kVictimType},
        {kReadInjectedMemory, Inject(kParamTarget)}}},
      {ScenarioId::kScreenCapture, kAnyVersion, false, {},
       {{kVictimSetup},
        {kAcquireRoot, root},
        {kInjectCode, Inject("container_agent"), C::kAlways, Hook::kSuppressSecureFlag},
        {kVictimLogin},
        {kCaptureScreen, Inject("container_agent")},
        {kVictimLock},
        {kCaptureScreen, Inject("container_agent")}}},
      {ScenarioId::kHideWarrantyBit, kAnyVersion, false, {},
       {{kVictimSetup, std::nullopt, C::kIfPreexisting},
        {kFlashRootedFirmware, flash},
        {kAcquireRoot, root},
        {kInjectCode, Inject("system_server"), C::kAlways, Hook::kKeystoreOverride},
        {kVictimCreate, std::nullopt, C::kIfFresh},
        {kVictimLogin},
        {kConfirmContainerEnabled}}},
      {ScenarioId::kDataExfilV2, kV2Only, true, {},
       {{kVictimSetup},
        {kBlacklistPayload, std::nullopt, C::kIfBlacklisted},
        {kInstallContainerApp, app},
        {kUpdateContainerApp, app},
        {kVictimLogin},
        {kHarvestContainerData, app}}},
  };
  std::map<ScenarioId, ScenarioDef> catalog;
  for (auto& def : defs) catalog.emplace(def.id, std::move(def));
  return catalog;
}

template <typename E, size_t N>
std::string_view Lookup(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [k, name] : table) {
    if (k == value) return name;
  }
  return "?";
}

template <typename E, size_t N>
std::optional<E> Reverse(const std::array<std::pair<E, std::string_view>, N>& table,
                         std::string_view text) {
  for (const auto& [k, name] : table) {
    if (name == text) return k;
  }
  return std::nullopt;
}

bool Applies(StepCondition when, const ScenarioParams& params) {
  switch (when) {
    case StepCondition::kAlways:
      return true;
    case StepCondition::kIfPowerOff:
      return params.power_off_before_read;
    case StepCondition::kIfPreexisting:
      return params.preexisting_container;
    case StepCondition::kIfFresh:
      return !params.preexisting_container;
    case StepCondition::kIfBlacklisted:
      return params.blacklisted;
  }
  return false;
}

}  // namespace

std::string_view Name(CapabilityKind kind) { return Lookup(kCapabilityNames, kind); }

std::string ToString(const Capability& capability) {
  std::string out(Name(capability.kind));
  if (capability.kind == CapabilityKind::kCodeInjection) {
    out += "(" + capability.process + ")";
  }
  return out;
}

std::optional<Capability> ParseCapability(std::string_view text) {
  if (text.starts_with("CodeInjection(") && text.ends_with(")")) {
    std::string_view process = text.substr(14, text.size() - 15);
    if (process.empty()) return std::nullopt;
    return Capability{CapabilityKind::kCodeInjection, std::string(process)};
  }
  auto kind = Reverse(kCapabilityNames, text);
  if (!kind || *kind == CapabilityKind::kCodeInjection) return std::nullopt;
  return Capability{*kind, ""};
}

std::string_view Name(ScenarioId id) { return Lookup(kScenarioNames, id); }

std::optional<ScenarioId> ParseScenarioId(std::string_view text) {
  return Reverse(kScenarioNames, text);
}

std::string_view Name(OutcomeKind kind) { return Lookup(kOutcomeNames, kind); }

std::optional<OutcomeKind> ParseOutcomeKind(std::string_view text) {
  return Reverse(kOutcomeNames, text);
}

std::string_view Name(StepOp op) {
  switch (op) {
    case StepOp::kVictimSetup: return "VictimSetup";
    case StepOp::kVictimLogin: return "VictimLogin";
    case StepOp::kVictimLock: return "VictimLock";
    case StepOp::kVictimType: return "VictimType";
    case StepOp::kVictimCreate: return "VictimCreate";
    case StepOp::kReboot: return "Reboot";
    case StepOp::kPowerCycle: return "PowerCycle";
    case StepOp::kAdvanceDelay: return "AdvanceDelay";
    case StepOp::kBlacklistPayload: return "BlacklistPayload";
    case StepOp::kInstallUserApp: return "InstallUserApp";
    case StepOp::kInstallUserCa: return "InstallUserCa";
    case StepOp::kRegisterVpn: return "RegisterVpn";
    case StepOp::kInterceptContainerTls: return "InterceptContainerTls";
    case StepOp::kClipboardUpdateDb: return "ClipboardUpdateDb";
    case StepOp::kClipboardRead: return "ClipboardRead";
    case StepOp::kLaunchUserActivity: return "LaunchUserActivity";
    case StepOp::kAdbStartBrowser: return "AdbStartBrowser";
    case StepOp::kAdbBroadcastSearchEngine: return "AdbBroadcastSearchEngine";
    case StepOp::kFlashRootedFirmware: return "FlashRootedFirmware";
    case StepOp::kAcquireRoot: return "AcquireRoot";
    case StepOp::kInjectCode: return "InjectCode";
    case StepOp::kRetrieveTimaKey: return "RetrieveTimaKey";
    case StepOp::kDeriveGuessedKey: return "DeriveGuessedKey";
    case StepOp::kVoldMountAsRoot: return "VoldMountAsRoot";
    case StepOp::kReadContainerFileAsRoot: return "ReadContainerFileAsRoot";
    case StepOp::kScrapeDekAsRoot: return "ScrapeDekAsRoot";
    case StepOp::kSecureStorageDecryptAsRoot: return "SecureStorageDecryptAsRoot";
    case StepOp::kReadInjectedMemory: return "ReadInjectedMemory";
    case StepOp::kCaptureScreen: return "CaptureScreen";
    case StepOp::kInstallContainerApp: return "InstallContainerApp";
    case StepOp::kUpdateContainerApp: return "UpdateContainerApp";
    case StepOp::kHarvestContainerData: return "HarvestContainerData";
    case StepOp::kConfirmContainerEnabled: return "ConfirmContainerEnabled";
  }
  return "?";
}

const ScenarioDef& ScenarioDefinition(ScenarioId id) {
  static const std::map<ScenarioId, ScenarioDef> catalog = BuildCatalog();
  return catalog.at(id);
}

ScenarioParams ResolveParams(ScenarioId id, ScenarioParams params) {
  if (params.inject_target.empty()) {
    params.inject_target = ScenarioDefinition(id).defaults.inject_target;
  }
  return params;
}

CapabilitySet RequiredCapabilities(ScenarioId id, const ScenarioParams& raw) {
  const ScenarioParams params = ResolveParams(id, raw);
  CapabilitySet required;
  for (const Step& step : ScenarioDefinition(id).steps) {
    if (!step.gate || !Applies(step.when, params)) continue;
    Capability gate = *step.gate;
    if (gate.process == kParamTarget) gate.process = params.inject_target;
    required.insert(gate);
  }
  return required;
}

bool StepApplies(const Step& step, const ScenarioParams& params) {
  return Applies(step.when, params);
}

}  // namespace knoxsim

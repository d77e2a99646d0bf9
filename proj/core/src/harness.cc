// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/harness.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

constexpr char kAttackerUserApp[] = "com.freeflashlight.pro";
constexpr char kAttackerContainerApp[] = "com.notes.pro";
constexpr char kPhishUrl[] = "http://www.attackerwebsite.com";
constexpr char kEvilSearch[] = "bing";
constexpr char kSearchEngineAction[] =
    "android.intent.action.CSC_BROWSER_SET_SEARCH_ENGINE";
constexpr char kGuessedPassword[] = "aaaaaaa";
constexpr char kBankHost[] = "mail.corp.example";

std::string HexOf(const Key256& key) { return ToHex(ByteView(key.data(), key.size())); }

std::string Readable(const ExposureEntry& entry) {
  switch (entry.kind) {
    case SecretKind::kPassword:
    case SecretKind::kKeystroke:
    case SecretKind::kClipText:
    case SecretKind::kEcryptfsKey:
      return ToString(entry.value);
    case SecretKind::kTimaKey:
    case SecretKind::kDek:
      return ToHex(entry.value);
  }
  return ToHex(entry.value);
}

// Blocked reason of a failed step.
using StepResult = Status<std::string>;

StepResult Block(std::string_view reason) { return Fail(std::string(reason)); }

class Runner {
 public:
  Runner(DeviceState& device, const ScenarioParams& params)
      : device_(device), params_(params) {}

  StepResult Execute(const Step& step) {
    switch (step.op) {
      case StepOp::kVictimSetup: return VictimSetup();
      case StepOp::kVictimLogin: return FromContainer(ContainerLogin(device_, Fixtures::kPassword));
      case StepOp::kVictimLock:
        ContainerLock(device_);
        return Ok();
      case StepOp::kVictimType: return VictimType();
      case StepOp::kVictimCreate:
        return FromContainer(ContainerCreate(device_, Fixtures::kPassword));
      case StepOp::kReboot:
        return Reboot(device_) == BootOutcome::kBooted ? StepResult(Ok()) : Block("BootLoop");
      case StepOp::kPowerCycle:
        PowerOff(device_);
        return *BootDevice(device_) == BootOutcome::kBooted ? StepResult(Ok())
                                                             : Block("BootLoop");
      case StepOp::kAdvanceDelay:
        AdvanceTick(device_, params_.read_delay_ticks);
        return Ok();
      case StepOp::kBlacklistPayload:
        device_.profile.install_policy.blacklist.insert(kAttackerContainerApp);
        return Ok();
      case StepOp::kInstallUserApp: return InstallUserApp();
      case StepOp::kInstallUserCa: return InstallUserCa();
      case StepOp::kRegisterVpn: return RegisterVpn();
      case StepOp::kInterceptContainerTls: return InterceptContainerTls();
      case StepOp::kClipboardUpdateDb: {
        auto r = ClipboardUpdateDb(device_, app_, kContainerId);
        if (!r) return Block(Name(r.error()));
        return Ok();
      }
      case StepOp::kClipboardRead: return ReadClipboard(app_);
      case StepOp::kLaunchUserActivity:
        StartUserActivity(device_, app_);
        return Ok();
      case StepOp::kAdbStartBrowser: return AdbStartBrowser();
      case StepOp::kAdbBroadcastSearchEngine: return AdbBroadcastSearchEngine();
      case StepOp::kFlashRootedFirmware: return FlashRooted();
      case StepOp::kAcquireRoot: return AcquireRoot();
      case StepOp::kInjectCode: return InjectCode(step);
      case StepOp::kRetrieveTimaKey: return RetrieveTimaKey();
      case StepOp::kDeriveGuessedKey: return DeriveGuessedKey();
      case StepOp::kVoldMountAsRoot: return VoldMountAsRoot();
      case StepOp::kReadContainerFileAsRoot: return ReadContainerFileAsRoot();
      case StepOp::kScrapeDekAsRoot: return ScrapeDekAsRoot();
      case StepOp::kSecureStorageDecryptAsRoot: return SecureStorageDecryptAsRoot();
      case StepOp::kReadInjectedMemory: return ReadInjectedMemory(step);
      case StepOp::kCaptureScreen: return CaptureScreen();
      case StepOp::kInstallContainerApp: return InstallContainerApp(1, false, true);
      case StepOp::kUpdateContainerApp: return InstallContainerApp(2, true, false);
      case StepOp::kHarvestContainerData: return HarvestContainerData();
      case StepOp::kConfirmContainerEnabled: return ConfirmContainerEnabled();
    }
    return Block("UnknownStep");
  }

  const std::vector<Extracted>& extracted() const { return extracted_; }

  // Values that count as a real compromise, collected omnisciently.
  std::set<std::string> GroundTruth() const {
    std::set<std::string> truth = {Fixtures::kPassword,    Fixtures::kClip,
                                   Fixtures::kFileBody,    Fixtures::kSdcardBody,
                                   Fixtures::kContact,     Fixtures::kCalendar,
                                   Fixtures::kTlsPayload, Fixtures::kTypedMessage};
    for (const auto& entry : device_.exposure.entries()) {
      if (entry.kind == SecretKind::kDek || entry.kind == SecretKind::kTimaKey) {
        truth.insert(ToHex(entry.value));
      }
    }
    for (const auto& [id, key] : device_.trust.installed_keys) truth.insert(HexOf(key));
    for (const auto& [point, mount] : device_.mounts) truth.insert(HexOf(mount.dek));
    return truth;
  }

 private:
  void Take(std::string kind, std::string value) {
    Extracted item{std::move(kind), std::move(value)};
    if (std::find(extracted_.begin(), extracted_.end(), item) == extracted_.end()) {
      extracted_.push_back(std::move(item));
    }
  }

  static StepResult FromContainer(const Status<ContainerError>& status) {
    if (!status) return Block(Name(status.error()));
    return Ok();
  }

  StepResult VictimSetup() {
    if (auto r = ContainerCreate(device_, Fixtures::kPassword); !r) {
      return Block("Setup" + std::string(Name(r.error())));
    }
    if (auto r = ContainerLogin(device_, Fixtures::kPassword); !r) {
      return Block("Setup" + std::string(Name(r.error())));
    }
    (void)FileWrite(device_, kContainerId, VolumeKind::kData, Fixtures::kFileName,
                    Fixtures::kFileBody);
    (void)FileWrite(device_, kContainerId, VolumeKind::kSdcard, Fixtures::kSdcardName,
                    Fixtures::kSdcardBody);
    (void)ClipboardWrite(device_, PidOf(device_, "container_agent"), Env::kContainer,
                         Fixtures::kClip);
    device_.providers[Env::kContainer].contacts = {Fixtures::kContact};
    device_.providers[Env::kContainer].calendar = {Fixtures::kCalendar};
    device_.providers[Env::kUser].contacts = {"Pat Doe +1-555-0100"};
    device_.providers[Env::kUser].calendar = {"Dentist 14:30"};
    ContainerLock(device_);
    return Ok();
  }

  StepResult VictimType() {
    auto r = KeyboardInput(device_, PidOf(device_, "container_agent"),
                           Fixtures::kTypedMessage, SecretKind::kKeystroke);
    if (!r) return Block(Name(r.error()));
    return Ok();
  }

  StepResult InstallUserApp() {
    AppManifest manifest{kAttackerUserApp, Signer::kOther,
                         {Permission::kInternet, Permission::kVpn}};
    if (auto r = InstallApp(device_, Env::kUser, manifest, true); !r) {
      return Block(Name(r.error()));
    }
    auto pid = LaunchApp(device_, Env::kUser, kAttackerUserApp);
    if (!pid) return Block("LaunchFailed");
    app_ = *pid;
    return Ok();
  }

  StepResult InstallUserCa() {
    ca_key_ = crypto::SigningKey::FromSeed(device_.rng.NextArray<32>());
    ca_ = MakeSelfSigned("CN=Flashlight Trust Services", *ca_key_);
    CertInstall(device_, Env::kUser, *ca_);
    return Ok();
  }

  StepResult RegisterVpn() {
    if (auto r = VpnRegister(device_, app_, true); !r) return Block(Name(r.error()));
    return Ok();
  }

  StepResult InterceptContainerTls() {
    if (!ca_) return Block("NoAttackerCa");
    auto leaf_key = crypto::SigningKey::FromSeed(device_.rng.NextArray<32>());
    std::vector<Certificate> chain = {
        IssueCertificate(std::string("CN=") + kBankHost, leaf_key.public_key(), *ca_,
                         *ca_key_),
        *ca_};
    auto verdict = TlsValidate(device_, Env::kContainer, chain);
    Log(device_, std::string("container tls ") + kBankHost + " -> " +
                     (verdict ? std::string(Name(*verdict)) : "MalformedChain"));
    if (!verdict || *verdict != TlsVerdict::kTrusted) return Block("UntrustedChain");
    Route route = RouteFlow(device_, {Env::kContainer, kBankHost});
    if (route.direct()) return Block("NotIntercepted");
    Take("TlsPayload", Fixtures::kTlsPayload);
    return Ok();
  }

  StepResult ReadClipboard(Pid reader) {
    auto clips = ClipboardRead(device_, reader, 0, 64);
    if (!clips) return Block(Name(clips.error()));
    for (const auto& text : *clips) Take("ClipText", text);
    return Ok();
  }

  StepResult AdbStartBrowser() {
    const std::string component =
        std::string(kWrapPrefix) + kBrowserPackage + "/" + kBrowserPackage + ".SBrowserMainActivity";
    if (auto r = AdbExec(device_, AdbStartActivity{component, kPhishUrl}); !r) {
      return Block(Name(r.error()));
    }
    return ConfirmBrowserSetting("url", kPhishUrl);
  }

  StepResult AdbBroadcastSearchEngine() {
    AdbBroadcast broadcast{std::string(kWrapPrefix) + kSearchEngineAction,
                           {{"searchEngine", kEvilSearch}}};
    if (auto r = AdbExec(device_, broadcast); !r) return Block(Name(r.error()));
    return ConfirmBrowserSetting("searchEngine", kEvilSearch);
  }

  StepResult ConfirmBrowserSetting(const std::string& key, const std::string& value) {
    for (const auto& [id, installed] : device_.apps.apps) {
      if (id.first != Env::kContainer) continue;
      auto it = installed.settings.find(key);
      if (it != installed.settings.end() && it->second == value) {
        Take("Effect", "container browser " + key + "=" + value);
        return Ok();
      }
    }
    return Block("NoEffect");
  }

  StepResult FlashRooted() {
    PowerOff(device_);
    auto flashed = FlashFirmware(
        device_, MakeRootedFirmware(device_.profile.model, device_.profile.system_block_count));
    if (!flashed) return Block(Name(flashed.error()));
    flashed_ = true;
    auto booted = BootDevice(device_);
    if (!booted || *booted != BootOutcome::kBooted) return Block("BootLoop");
    return Ok();
  }

  StepResult AcquireRoot() {
    if (flashed_ && device_.efuse.warranty_bit()) {
      Log(device_, "root via custom kernel");
    } else if (RkpGuard(device_, {KernelOpKind::kModifyCredStruct, World::kNormal}) ==
               RkpVerdict::kBlocked) {
      return Block("RkpBlocked");
    } else {
      Log(device_, "root via cred overwrite");
    }
    root_ = device_.processes.Spawn(
        {.name = "exploit", .label = "su", .uid_class = UidClass::kRoot});
    // Root can run a helper under the system uid to talk to the TIMA driver.
    tima_client_ = device_.processes.Spawn(
        {.name = "tima_client", .label = "su", .uid_class = UidClass::kSystem});
    return Ok();
  }

  std::string Target(const Step& step) const {
    std::string process = step.gate ? step.gate->process : "";
    return process == kParamTarget ? params_.inject_target : process;
  }

  StepResult InjectCode(const Step& step) {
    if (root_.value == 0) return Block("NoRoot");
    const std::string target = Target(step);
    Process* p = device_.processes.Find(target);
    if (!p) return Block("NoSuchProcess");
    p->injected = true;
    if (step.hook) p->hooks.insert(*step.hook);
    Log(device_, "inject " + target + (step.hook ? " hook=" + std::string(Name(*step.hook)) : ""));
    return Ok();
  }

  StepResult RetrieveTimaKey() {
    auto key = TimaKeystoreRetrieve(device_, tima_client_, kContainerId);
    if (!key) return Block(Name(key.error()));
    tima_key_ = *key;
    Take("TimaKey", HexOf(*key));
    return Ok();
  }

  StepResult DeriveGuessedKey() {
    auto key = DeriveEcryptfsKey(device_.profile.knox_version, kGuessedPassword, tima_key_);
    if (!key) return Block(Name(key.error()));
    guessed_ = key->chars();
    return Ok();
  }

  StepResult VoldMountAsRoot() {
    if (auto r = VoldMountCommand(device_, root_, kContainerId, guessed_); !r) {
      return Block(Name(r.error()));
    }
    Take("EcryptfsKey", guessed_);
    return Ok();
  }

  StepResult ReadContainerFileAsRoot() {
    const std::string path =
        VolumeFor(kContainerId, VolumeKind::kData).mount_point + "/" + Fixtures::kFileName;
    auto body = ReadMountPath(device_, path);
    if (!body) return Block(Name(body.error()));
    Take("FileData", *body);
    return Ok();
  }

  StepResult ScrapeDekAsRoot() {
    for (const auto& entry : device_.exposure.VisibleToRoot()) {
      if (entry.kind == SecretKind::kDek) Take("DEK", ToHex(entry.value));
    }
    return Ok();
  }

  StepResult SecureStorageDecryptAsRoot() {
    auto blob = device_.fs.Read(kEdkPath, UidClass::kRoot);
    if (!blob) return Block("NoEdkFile");
    auto plain = SecureStorageDecryptBlob(device_, root_, *blob);
    if (!plain) return Block(Name(plain.error()));
    Take("EdkPayload", ToHex(*plain));
    return Ok();
  }

  StepResult ReadInjectedMemory(const Step& step) {
    for (const auto& entry : device_.exposure.VisibleToInjection(Target(step))) {
      Take(std::string(Name(entry.kind)), Readable(entry));
    }
    return Ok();
  }

  StepResult CaptureScreen() {
    auto window = FindWindow(device_, "knox_home");
    if (!window) window = FindWindow(device_, "knox_login");
    if (!window) return Block("NoSuchWindow");
    auto shot = Screenshot(device_, PidOf(device_, "container_agent"), *window);
    if (!shot) return Block(Name(shot.error()));
    Take("Screenshot", *shot);
    return Ok();
  }

  StepResult InstallContainerApp(int version, bool malicious, bool accept) {
    AppManifest manifest{kAttackerContainerApp,
                         Signer::kOther,
                         {Permission::kReadContacts, Permission::kReadCalendar,
                          Permission::kReadSdcard},
                         version,
                         malicious};
    if (auto r = InstallApp(device_, Env::kContainer, manifest, accept); !r) {
      return Block(Name(r.error()));
    }
    return Ok();
  }

  StepResult HarvestContainerData() {
    auto pid = LaunchApp(device_, Env::kContainer, kAttackerContainerApp);
    if (!pid) return Block("LaunchFailed");
    for (auto kind : {ProviderKind::kContacts, ProviderKind::kCalendar}) {
      auto rows = QueryProvider(device_, *pid, kind);
      if (!rows) continue;
      for (const auto& row : *rows) {
        Take(kind == ProviderKind::kContacts ? "Contact" : "Calendar", row);
      }
    }
    (void)ReadClipboard(*pid);
    if (auto file = ReadSdcardFile(device_, *pid, Fixtures::kSdcardName)) {
      Take("SdcardFile", *file);
    }
    return Ok();
  }

  StepResult ConfirmContainerEnabled() {
    if (!device_.efuse.warranty_bit()) return Block("FuseIntact");
    if (device_.session.phase != SessionPhase::kUnlocked) return Block("NotUnlocked");
    Take("Effect", "container unlocked with warranty bit set");
    return Ok();
  }

  DeviceState& device_;
  const ScenarioParams& params_;
  std::vector<Extracted> extracted_;
  Pid app_{0};
  Pid root_{0};
  Pid tima_client_{0};
  bool flashed_ = false;
  Key256 tima_key_{};
  std::string guessed_;
  std::optional<crypto::SigningKey> ca_key_;
  std::optional<Certificate> ca_;
};

std::string JoinCapabilities(const CapabilitySet& caps) {
  std::string out;
  for (const auto& cap : caps) {
    if (!out.empty()) out += ",";
    out += ToString(cap);
  }
  return out;
}

}  // namespace

std::string_view Name(ReplayError error) {
  switch (error) {
    case ReplayError::kSeedMismatch:
      return "SeedMismatch";
    case ReplayError::kProfileMismatch:
      return "ProfileMismatch";
    case ReplayError::kDivergence:
      return "Divergence";
  }
  return "?";
}

ScenarioReport RunScenario(DeviceState& device, ScenarioId id,
                           const CapabilitySet& capabilities, ScenarioParams params) {
  params = ResolveParams(id, std::move(params));
  const ScenarioDef& def = ScenarioDefinition(id);
  ScenarioReport report{id, device.profile.id, device.seed, capabilities, params, {}, {}, {}};

  auto finish = [&](Outcome outcome) {
    report.outcome = std::move(outcome);
    Log(device, "outcome " + std::string(Name(report.outcome.kind)) +
                    (report.outcome.reason.empty() ? "" : "(" + report.outcome.reason + ")"));
    report.trace = device.trace;
    return report;
  };

  if (!def.versions.contains(device.profile.knox_version)) {
    return finish({OutcomeKind::kProfileMismatch,
                   "requires " + std::string(Name(*def.versions.begin()))});
  }
  CapabilitySet missing;
  for (const auto& cap : RequiredCapabilities(id, params)) {
    if (!capabilities.contains(cap)) missing.insert(cap);
  }
  if (!missing.empty()) {
    return finish({OutcomeKind::kMissingCapability, JoinCapabilities(missing)});
  }

  Log(device, "scenario " + std::string(Name(id)));
  Runner runner(device, params);
  for (const Step& step : def.steps) {
    if (!StepApplies(step, params)) continue;
    Log(device, "step " + std::string(Name(step.op)));
    auto result = runner.Execute(step);
    if (!result) {
      report.extracted = runner.extracted();
      return finish({OutcomeKind::kBlocked, result.error()});
    }
  }
  report.extracted = runner.extracted();
  if (def.exfiltration) {
    const auto truth = runner.GroundTruth();
    const bool recovered =
        std::any_of(report.extracted.begin(), report.extracted.end(),
                    [&](const Extracted& e) { return truth.contains(e.value); });
    if (!recovered) return finish({OutcomeKind::kBlocked, "NothingExtracted"});
  }
  return finish({OutcomeKind::kSucceeded, ""});
}

ScenarioReport RunScenario(const DeviceProfile& profile, uint64_t seed, ScenarioId id,
                           const CapabilitySet& capabilities, ScenarioParams params) {
  DeviceState device = CreateDevice(profile, seed);
  return RunScenario(device, id, capabilities, std::move(params));
}

Result<ScenarioReport, ReplayError> ReplayTrace(const ScenarioReport& report,
                                                const DeviceProfile& profile,
                                                uint64_t seed) {
  if (seed != report.seed) return Fail(ReplayError::kSeedMismatch);
  if (profile.id != report.profile) return Fail(ReplayError::kProfileMismatch);
  ScenarioReport again =
      RunScenario(profile, seed, report.scenario, report.capabilities, report.params);
  if (!(again == report)) return Fail(ReplayError::kDivergence);
  return again;
}

uint64_t CandidateCount(size_t charset_size, size_t length) {
  uint64_t count = 1;
  for (size_t i = 8; i < length; ++i) {
    if (count > std::numeric_limits<uint64_t>::max() / charset_size) {
      return std::numeric_limits<uint64_t>::max();
    }
    count *= charset_size;
  }
  return count;
}

Result<BruteForceHit, BruteForceMiss> BruteForceKeyOracle(const EdkPayload& payload,
                                                          const Key256& tima_key,
                                                          const BruteForceConfig& config) {
  const std::string& charset = config.charset;
  if (charset.empty() || config.budget == 0) return Fail(BruteForceMiss{0});
  const size_t min_len = std::max(config.min_len, kMinPasswordLength);
  const size_t max_len = std::min(config.max_len, kMaxV1PasswordLength);

  // (length, candidates) segments in enumeration order.
  std::vector<std::pair<size_t, uint64_t>> segments;
  bool short_done = false;
  for (size_t len = min_len; len <= max_len; ++len) {
    if (len <= 8) {
      if (short_done) continue;
      short_done = true;
    }
    segments.emplace_back(len, CandidateCount(charset.size(), len));
  }
  uint64_t total = 0;
  for (const auto& [len, count] : segments) {
    total = count > config.budget - total ? config.budget : total + count;
    if (total == config.budget) break;
  }

  auto candidate = [&](uint64_t index) {
    for (const auto& [len, count] : segments) {
      if (index >= count) {
        index -= count;
        continue;
      }
      std::string pw(len, charset[0]);
      // Only the leading len-8 characters reach the key.
      const size_t varying = len > 8 ? len - 8 : 0;
      for (size_t pos = varying; pos-- > 0;) {
        pw[pos] = charset[index % charset.size()];
        index /= charset.size();
      }
      return pw;
    }
    return std::string();
  };

  constexpr uint64_t kNone = std::numeric_limits<uint64_t>::max();
  constexpr uint64_t kChunk = 16;
  std::atomic<uint64_t> next{0};
  std::atomic<uint64_t> best{kNone};
  auto worker = [&] {
    for (;;) {
      const uint64_t start = next.fetch_add(kChunk);
      if (start >= total || start >= best.load()) return;
      const uint64_t end = std::min(total, start + kChunk);
      for (uint64_t i = start; i < end; ++i) {
        auto key = DeriveEcryptfsKeyV1(candidate(i), tima_key);
        if (!key || !UnsealDek(payload, *key)) continue;
        uint64_t seen = best.load();
        while (i < seen && !best.compare_exchange_weak(seen, i)) {
        }
        break;
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (best.load() == kNone) return Fail(BruteForceMiss{total});
  const std::string pw = candidate(best.load());
  return BruteForceHit{*DeriveEcryptfsKeyV1(pw, tima_key), pw, best.load() + 1};
}

FuzzResult IsolationFuzz(const DeviceProfile& profile, uint64_t seed, uint64_t calls) {
  DeviceState device = CreateDevice(profile, seed);
  DeterministicRng chooser(seed ^ 0x9e3779b97f4a7c15ULL);
  FuzzResult result;

  // The victim's container, populated the same way the scenarios do.
  ScenarioParams params;
  Runner victim(device, params);
  (void)victim.Execute({StepOp::kVictimSetup});
  (void)victim.Execute({StepOp::kInstallUserApp});
  const Pid app = device.processes.Find(kAttackerUserApp)->pid;

  std::vector<std::string> secrets = {Fixtures::kPassword, Fixtures::kClip,
                                      Fixtures::kFileBody, Fixtures::kSdcardBody,
                                      Fixtures::kContact,  Fixtures::kCalendar,
                                      Fixtures::kTypedMessage};
  auto secret_hex = [&] {
    std::vector<std::string> out;
    for (const auto& [point, mount] : device.mounts) out.push_back(HexOf(mount.dek));
    for (const auto& [id, key] : device.trust.installed_keys) out.push_back(HexOf(key));
    return out;
  };
  auto check = [&](std::string_view op, std::string_view observed) {
    for (const auto& s : secrets) {
      if (observed.find(s) != std::string_view::npos) {
        result.leaks.push_back(std::string(op) + ": " + s);
      }
    }
    const std::string hex = ToHex(ToBytes(observed));
    for (const auto& s : secret_hex()) {
      if (observed.find(s) != std::string_view::npos || hex.find(s) != std::string::npos) {
        result.leaks.push_back(std::string(op) + ": key material");
      }
    }
  };
  auto check_bytes = [&](std::string_view op, const Bytes& bytes) {
    check(op, ToString(bytes));
  };

  const std::vector<std::string> paths = device.fs.List("/");
  for (uint64_t n = 0; n < calls; ++n, ++result.calls) {
    switch (chooser.Uniform(14)) {
      case 0: {
        auto clips = ClipboardRead(device, app, chooser.Uniform(3), 1 + chooser.Uniform(8));
        if (clips) {
          for (const auto& c : *clips) check("ClipboardRead", c);
        }
        break;
      }
      case 1:
        (void)ClipboardUpdateDb(device, app, static_cast<int>(chooser.Uniform(3)));
        break;
      case 2:
        (void)ClipboardWrite(device, app, chooser.Uniform(2) ? Env::kUser : Env::kContainer,
                             "attacker clip " + std::to_string(n));
        break;
      case 3: {
        auto rows = QueryProvider(device, app, static_cast<ProviderKind>(chooser.Uniform(3)));
        if (rows) {
          for (const auto& r : *rows) check("QueryProvider", r);
        }
        break;
      }
      case 4: {
        auto file = ReadSdcardFile(device, app, Fixtures::kSdcardName);
        if (file) check("ReadSdcardFile", *file);
        break;
      }
      case 5: {
        const auto& path = paths[chooser.Uniform(paths.size())];
        auto data = device.fs.Read(path, UidClass::kUntrusted);
        if (data) check_bytes("FsRead " + path, *data);
        break;
      }
      case 6: {
        SmcRequest request;
        switch (chooser.Uniform(4)) {
          case 0: request = KeystoreRetrieve{kContainerId}; break;
          case 1: request = KeystoreDeriveKey{kContainerId, kGuessedPassword}; break;
          case 2: request = SecureStorageDecrypt{chooser.NextBytes(64)}; break;
          default: request = KeystoreGenerate{kContainerId}; break;
        }
        auto reply = SmcDispatch(device, app, 1 + static_cast<int>(chooser.Uniform(3)), request);
        if (reply) check_bytes("SmcDispatch", *reply);
        break;
      }
      case 7: {
        auto key = DeriveEcryptfsKey(device.profile.knox_version, kGuessedPassword, Key256{});
        if (key) (void)VoldMountCommand(device, app, kContainerId, key->chars());
        break;
      }
      case 8: {
        auto shot = Screenshot(device, app, 1 + static_cast<int>(chooser.Uniform(
                                                device.windows.next_id + 1)));
        if (shot) check("Screenshot", *shot);
        break;
      }
      case 9:
        StartUserActivity(device, app);
        break;
      case 10:
        (void)VpnRegister(device, app, false);
        break;
      case 11:
        AdvanceTick(device, 1 + chooser.Uniform(5));
        break;
      case 12:
        for (const Process* p : device.processes.VisibleTo(app)) check("ProcessList", p->name);
        break;
      default:
        // Victim activity keeps the container moving through its phases.
        switch (chooser.Uniform(5)) {
          case 0: (void)ContainerLogin(device, Fixtures::kPassword); break;
          case 1: ContainerLock(device); break;
          case 2: ContainerToBackground(device); break;
          case 3: ContainerToForeground(device); break;
          default:
            if (device.session.phase == SessionPhase::kUnlocked) {
              (void)victim.Execute({StepOp::kVictimType});
              (void)ClipboardWrite(device, PidOf(device, "container_agent"),
                                   Env::kContainer, Fixtures::kClip);
            }
            break;
        }
        break;
    }
  }
  return result;
}

}  // namespace knoxsim

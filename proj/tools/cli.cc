// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cli.h"

#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "knoxsim/device.h"
#include "knoxsim/suite_io.h"

namespace knoxsim::cli {
namespace {

std::string Describe(const Outcome& outcome) {
  std::string s(Name(outcome.kind));
  if (!outcome.reason.empty()) s += "(" + outcome.reason + ")";
  return s;
}

// Picks the suite entries a run covers.
Result<Suite, IoError> SelectEntries(const RunConfig& config, const DeviceProfile& profile) {
  const std::string suite_path = config.suite.value_or(KNOXSIM_DEFAULT_SUITE);
  auto suite = LoadSuite(suite_path);
  if (!suite) return Fail(suite.error());
  Suite selected{suite->name, suite->For(profile.id)};
  if (!config.scenario) return selected;

  auto id = ParseScenarioId(*config.scenario);
  if (!id) return Fail(IoError{"unknown scenario '" + *config.scenario + "'"});
  std::erase_if(selected.entries, [&](const SuiteEntry& e) { return e.scenario != *id; });
  if (!config.suite) {
    // Single-scenario runs check the base variant only.
    std::erase_if(selected.entries,
                  [](const SuiteEntry& e) { return !(e.params == ScenarioParams{}); });
  }
  if (selected.entries.empty()) {
    return Fail(IoError{"no expected outcome for " + *config.scenario + " on " + profile.id +
                        " in " + suite_path});
  }
  return selected;
}

std::string ParamsSummary(const ScenarioParams& p) {
  std::vector<std::string> parts;
  if (!p.inject_target.empty()) parts.push_back("inject_target=" + p.inject_target);
  if (p.read_delay_ticks) parts.push_back("read_delay_ticks=" + std::to_string(p.read_delay_ticks));
  if (p.power_off_before_read) parts.push_back("power_off_before_read");
  if (p.preexisting_container) parts.push_back("preexisting_container");
  if (p.blacklisted) parts.push_back("blacklisted");
  std::string out;
  for (const auto& part : parts) out += (out.empty() ? "" : " ") + part;
  return out;
}

void PrintTable(std::ostream& out, const std::vector<SuiteResult>& results, bool verbose) {
  out << std::left << std::setw(24) << "SCENARIO" << std::setw(40) << "PARAMS"
      << std::setw(28) << "EXPECTED" << std::setw(28) << "ACTUAL" << "\n";
  size_t matched = 0;
  for (const auto& r : results) {
    const std::string params = ParamsSummary(r.entry.params);
    out << std::setw(24) << Name(r.entry.scenario) << std::setw(40) << params
        << std::setw(28) << Describe(r.entry.expected) << std::setw(28)
        << Describe(r.report.outcome) << (r.matched() ? "ok" : "MISMATCH") << "\n";
    if (r.matched()) ++matched;
    if (verbose) {
      for (const auto& e : r.report.extracted) {
        out << "    extracted " << e.kind << ": " << e.value << "\n";
      }
      for (const auto& line : r.report.trace) out << "    | " << line << "\n";
    }
  }
  out << matched << "/" << results.size() << " matched\n";
}

std::string ExposureValue(const ExposureEntry& e) {
  switch (e.kind) {
    case SecretKind::kTimaKey:
    case SecretKind::kDek:
      return ToHex(e.value);
    default:
      return ToString(e.value);
  }
}

}  // namespace

std::filesystem::path ResolveProfilePath(const std::string& profile) {
  std::filesystem::path path(profile);
  if (std::filesystem::exists(path) || path.has_parent_path()) return path;
  if (path.extension() != ".json") path += ".json";
  return std::filesystem::path(KNOXSIM_DEFAULT_PROFILE_DIR) / path;
}

int CmdRun(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto profile = LoadProfile(ResolveProfilePath(config.profile));
  if (!profile) {
    err << "error: " << profile.error().message << "\n";
    return kExitConfigError;
  }
  auto suite = SelectEntries(config, *profile);
  if (!suite) {
    err << "error: " << suite.error().message << "\n";
    return kExitConfigError;
  }
  auto results = RunSuite(*profile, *suite, config.seed);
  out << "profile " << profile->id << " (" << profile->model << ", KNOX "
      << Name(profile->knox_version) << ") seed " << config.seed << "\n";
  PrintTable(out, results, config.verbose);

  if (config.report) {
    auto doc = RunDocument(*profile, config.seed, results);
    if (auto wrote = WriteTextFile(*config.report, doc.dump(2) + "\n"); !wrote) {
      err << "error: " << wrote.error().message << "\n";
      return kExitConfigError;
    }
  }
  const bool all = std::all_of(results.begin(), results.end(),
                               [](const SuiteResult& r) { return r.matched(); });
  return all ? kExitOk : kExitMismatch;
}

int CmdDemo(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto profile = LoadProfile(ResolveProfilePath(config.profile));
  if (!profile) {
    err << "error: " << profile.error().message << "\n";
    return kExitConfigError;
  }
  const DeviceProfile& p = *profile;
  out << "== knoxsim demo: " << p.id << " (" << p.model << ", KNOX " << Name(p.knox_version)
      << "), seed " << config.seed << "\n";
  DeviceState device = CreateDevice(p, config.seed);
  out << "boot: " << Name(device.power) << ", warranty bit "
      << (device.efuse.warranty_bit() ? 1 : 0) << "\n";

  auto step = [&](std::string_view what, std::string result) {
    out << std::left << std::setw(44) << what << " " << result << "\n";
    AdvanceTick(device);
  };
  auto status = [](const auto& r) {
    return r ? std::string("Ok") : std::string(Name(r.error()));
  };
  step("container_create(\"hunter77\")", status(ContainerCreate(device, Fixtures::kPassword)));
  step("container_login(\"hunter77\")", status(ContainerLogin(device, Fixtures::kPassword)));
  step(std::string("file_write ") + Fixtures::kFileName,
       status(FileWrite(device, kContainerId, VolumeKind::kData, Fixtures::kFileName,
                        Fixtures::kFileBody)));
  const std::string backing = BackingPath(kContainerId, VolumeKind::kData, Fixtures::kFileName);
  if (auto raw = device.fs.Read(backing, UidClass::kRoot)) {
    step("  backing " + backing, std::to_string(raw->size()) + " bytes of ciphertext");
  }
  ContainerLock(device);
  step("container_lock", std::string("data volume mounted: ") +
                             (IsMounted(device, kContainerId) ? "yes" : "no"));
  (void)ContainerLogin(device, Fixtures::kPassword);
  const std::string component =
      std::string(kWrapPrefix) + kBrowserPackage + "/" + kBrowserPackage + ".SBrowserMainActivity";
  step("adb am start " + component,
       status(AdbExec(device, AdbStartActivity{component, "http://www.attackerwebsite.com"})));

  out << "\nexposure ledger:\n";
  for (const auto& e : device.exposure.entries()) {
    out << "  t" << e.tick << "  " << std::setw(12) << Name(e.kind) << std::setw(18)
        << e.process << ExposureValue(e) << "\n";
  }
  std::vector<std::string> holders;
  for (const auto& [kind, process] : device.exposure.Holders()) {
    if (kind == SecretKind::kPassword) holders.push_back(process);
  }
  out << "password held by " << holders.size() << " processes:";
  for (const auto& h : holders) out << " " << h;
  out << "\n\n";

  const ScenarioId attack = ScenarioId::kCve2016_1919;
  auto report = RunScenario(p, config.seed, attack, RequiredCapabilities(attack, {}));
  out << "attack " << Name(attack) << ": " << Describe(report.outcome) << "\n";
  for (const auto& e : report.extracted) out << "  extracted " << e.kind << ": " << e.value << "\n";
  if (config.verbose) {
    for (const auto& line : device.trace) out << "  | " << line << "\n";
  }
  return kExitOk;
}

int CmdListScenarios(std::ostream& out) {
  for (ScenarioId id : kAllScenarios) {
    const ScenarioDef& def = ScenarioDefinition(id);
    std::string versions;
    for (auto v : def.versions) versions += (versions.empty() ? "" : ",") + std::string(Name(v));
    std::string caps;
    for (const auto& c : RequiredCapabilities(id, {})) {
      caps += (caps.empty() ? "" : ", ") + ToString(c);
    }
    out << std::left << std::setw(24) << Name(id) << std::setw(10) << versions << caps << "\n";
  }
  return kExitOk;
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"knoxsim: container security simulator and attack harness"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--profile", config.profile, "Profile JSON path or bundled profile name")
        ->required();
    sub->add_option("--seed", config.seed, "Device RNG seed")->capture_default_str();
    sub->add_flag("--verbose", config.verbose, "Print extracted values and traces");
  };
  CLI::App* run = app.add_subcommand("run", "Run one scenario or a suite and check outcomes");
  add_common(run);
  run->add_option("--scenario", config.scenario, "Scenario id, e.g. CVE_2016_1919");
  run->add_option("--suite", config.suite, "Suite JSON path (default: bundled full suite)");
  run->add_option("--report", config.report, "Write the JSON report here");
  CLI::App* demo = app.add_subcommand("demo", "Walk through a container session and one attack");
  add_common(demo);
  CLI::App* list = app.add_subcommand("list-scenarios", "List scenarios and capabilities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  if (run->parsed()) return CmdRun(config, out, err);
  if (demo->parsed()) return CmdDemo(config, out, err);
  if (list->parsed()) return CmdListScenarios(out);
  return kExitConfigError;
}

}  // namespace knoxsim::cli

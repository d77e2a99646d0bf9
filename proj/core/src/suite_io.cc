// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/suite_io.h"

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Result<CapabilitySet, IoError> CapabilitiesFromJson(const json& j) {
  if (!j.is_array()) return Fail(IoError{"capabilities must be an array"});
  CapabilitySet caps;
  for (const auto& item : j) {
    if (!item.is_string()) return Fail(IoError{"capability must be a string"});
    auto cap = ParseCapability(item.get<std::string>());
    if (!cap) return Fail(IoError{"unknown capability '" + item.get<std::string>() + "'"});
    caps.insert(*cap);
  }
  return caps;
}

ordered_json CapabilitiesToJson(const CapabilitySet& caps) {
  ordered_json out = ordered_json::array();
  for (const auto& cap : caps) out.push_back(ToString(cap));
  return out;
}

Result<Outcome, IoError> OutcomeFromJson(const json& j) {
  if (!j.is_object() || !j.contains("outcome") || !j.at("outcome").is_string()) {
    return Fail(IoError{"outcome object needs a string 'outcome'"});
  }
  auto kind = ParseOutcomeKind(j.at("outcome").get<std::string>());
  if (!kind) return Fail(IoError{"unknown outcome '" + j.at("outcome").get<std::string>() + "'"});
  Outcome outcome{*kind, ""};
  if (j.contains("reason")) {
    if (!j.at("reason").is_string()) return Fail(IoError{"reason must be a string"});
    outcome.reason = j.at("reason").get<std::string>();
  }
  return outcome;
}

ordered_json OutcomeToJson(const Outcome& outcome) {
  return {{"outcome", Name(outcome.kind)}, {"reason", outcome.reason}};
}

Result<ScenarioId, IoError> ScenarioFromJson(const json& j) {
  if (!j.is_string()) return Fail(IoError{"scenario must be a string"});
  auto id = ParseScenarioId(j.get<std::string>());
  if (!id) return Fail(IoError{"unknown scenario '" + j.get<std::string>() + "'"});
  return *id;
}

Status<IoError> Require(bool ok, std::string message) {
  if (!ok) return Fail(IoError{std::move(message)});
  return Ok();
}

}  // namespace

std::vector<SuiteEntry> Suite::For(const std::string& profile_id) const {
  std::vector<SuiteEntry> out;
  for (const auto& e : entries) {
    if (e.profile.empty() || e.profile == profile_id) out.push_back(e);
  }
  return out;
}

ordered_json ParamsToJson(const ScenarioParams& p) {
  return {{"inject_target", p.inject_target},
          {"read_delay_ticks", p.read_delay_ticks},
          {"power_off_before_read", p.power_off_before_read},
          {"preexisting_container", p.preexisting_container},
          {"blacklisted", p.blacklisted}};
}

Result<ScenarioParams, IoError> ParamsFromJson(const json& j) {
  if (!j.is_object()) return Fail(IoError{"params must be an object"});
  ScenarioParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "inject_target" && value.is_string()) {
      p.inject_target = value.get<std::string>();
    } else if (key == "read_delay_ticks" && value.is_number_unsigned()) {
      p.read_delay_ticks = value.get<uint64_t>();
    } else if (key == "power_off_before_read" && value.is_boolean()) {
      p.power_off_before_read = value.get<bool>();
    } else if (key == "preexisting_container" && value.is_boolean()) {
      p.preexisting_container = value.get<bool>();
    } else if (key == "blacklisted" && value.is_boolean()) {
      p.blacklisted = value.get<bool>();
    } else {
      return Fail(IoError{"bad param '" + key + "'"});
    }
  }
  return p;
}

Result<Suite, IoError> SuiteFromJson(const json& j) {
  if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array()) {
    return Fail(IoError{"suite needs an 'entries' array"});
  }
  Suite suite;
  if (j.contains("name") && j.at("name").is_string()) suite.name = j.at("name").get<std::string>();
  size_t index = 0;
  for (const auto& item : j.at("entries")) {
    const std::string where = "entry " + std::to_string(index++) + ": ";
    if (!item.is_object() || !item.contains("scenario") || !item.contains("expected")) {
      return Fail(IoError{where + "needs 'scenario' and 'expected'"});
    }
    SuiteEntry entry;
    auto id = ScenarioFromJson(item.at("scenario"));
    if (!id) return Fail(IoError{where + id.error().message});
    entry.scenario = *id;
    if (item.contains("profile")) {
      if (!item.at("profile").is_string()) return Fail(IoError{where + "profile must be a string"});
      entry.profile = item.at("profile").get<std::string>();
    }
    if (item.contains("capabilities")) {
      auto caps = CapabilitiesFromJson(item.at("capabilities"));
      if (!caps) return Fail(IoError{where + caps.error().message});
      entry.capabilities = *caps;
    }
    if (item.contains("params")) {
      auto params = ParamsFromJson(item.at("params"));
      if (!params) return Fail(IoError{where + params.error().message});
      entry.params = *params;
    }
    auto expected = OutcomeFromJson(item.at("expected"));
    if (!expected) return Fail(IoError{where + expected.error().message});
    entry.expected = *expected;
    suite.entries.push_back(std::move(entry));
  }
  return suite;
}

Result<Suite, IoError> ParseSuite(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return Fail(IoError{"suite is not valid JSON"});
  return SuiteFromJson(j);
}

Result<Suite, IoError> LoadSuite(const std::filesystem::path& path) {
  auto text = ReadTextFile(path);
  if (!text) return Fail(text.error());
  auto suite = ParseSuite(*text);
  if (!suite) return Fail(IoError{path.string() + ": " + suite.error().message});
  return suite;
}

ordered_json SuiteToJson(const Suite& suite) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : suite.entries) {
    ordered_json item = {{"scenario", Name(e.scenario)}};
    if (!e.profile.empty()) item["profile"] = e.profile;
    item["capabilities"] = CapabilitiesToJson(e.capabilities);
    if (!(e.params == ScenarioParams{})) item["params"] = ParamsToJson(e.params);
    item["expected"] = OutcomeToJson(e.expected);
    entries.push_back(std::move(item));
  }
  return {{"name", suite.name}, {"entries", entries}};
}

ordered_json ReportToJson(const ScenarioReport& r) {
  ordered_json extracted = ordered_json::array();
  for (const auto& e : r.extracted) extracted.push_back({{"kind", e.kind}, {"value", e.value}});
  return {{"scenario", Name(r.scenario)},
          {"profile", r.profile},
          {"seed", r.seed},
          {"capabilities", CapabilitiesToJson(r.capabilities)},
          {"params", ParamsToJson(r.params)},
          {"outcome", Name(r.outcome.kind)},
          {"reason", r.outcome.reason},
          {"extracted", extracted},
          {"trace", r.trace}};
}

Result<ScenarioReport, IoError> ReportFromJson(const json& j) {
  for (const char* key : {"scenario", "profile", "seed", "capabilities", "params", "outcome",
                          "reason", "extracted", "trace"}) {
    if (!j.is_object() || !j.contains(key)) {
      return Fail(IoError{std::string("report missing '") + key + "'"});
    }
  }
  ScenarioReport r{};
  auto id = ScenarioFromJson(j.at("scenario"));
  if (!id) return Fail(id.error());
  r.scenario = *id;
  if (!j.at("profile").is_string() || !j.at("seed").is_number_unsigned() ||
      !j.at("trace").is_array() || !j.at("extracted").is_array()) {
    return Fail(IoError{"report field has the wrong type"});
  }
  r.profile = j.at("profile").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  auto caps = CapabilitiesFromJson(j.at("capabilities"));
  if (!caps) return Fail(caps.error());
  r.capabilities = *caps;
  auto params = ParamsFromJson(j.at("params"));
  if (!params) return Fail(params.error());
  r.params = *params;
  auto outcome = OutcomeFromJson(j);
  if (!outcome) return Fail(outcome.error());
  r.outcome = *outcome;
  for (const auto& e : j.at("extracted")) {
    if (!e.is_object() || !e.contains("kind") || !e.contains("value") ||
        !e.at("kind").is_string() || !e.at("value").is_string()) {
      return Fail(IoError{"extracted item needs string 'kind' and 'value'"});
    }
    r.extracted.push_back({e.at("kind").get<std::string>(), e.at("value").get<std::string>()});
  }
  for (const auto& line : j.at("trace")) {
    if (!line.is_string()) return Fail(IoError{"trace lines must be strings"});
    r.trace.push_back(line.get<std::string>());
  }
  return r;
}

std::vector<SuiteResult> RunSuite(const DeviceProfile& profile, const Suite& suite,
                                  uint64_t seed) {
  std::vector<SuiteResult> results;
  for (const auto& entry : suite.For(profile.id)) {
    results.push_back({entry, RunScenario(profile, seed, entry.scenario, entry.capabilities,
                                          entry.params)});
  }
  return results;
}

ordered_json RunDocument(const DeviceProfile& profile, uint64_t seed,
                         const std::vector<SuiteResult>& results) {
  ordered_json items = ordered_json::array();
  size_t matched = 0;
  for (const auto& r : results) {
    ordered_json item = ReportToJson(r.report);
    item["expected"] = OutcomeToJson(r.entry.expected);
    item["matched"] = r.matched();
    if (r.matched()) ++matched;
    items.push_back(std::move(item));
  }
  return {{"schema", kReportSchema},
          {"profile", profile.id},
          {"seed", seed},
          {"results", items},
          {"summary",
           {{"total", results.size()},
            {"matched", matched},
            {"mismatched", results.size() - matched}}}};
}

Status<IoError> ValidateRunDocument(const json& j) {
  if (auto r = Require(j.is_object(), "document must be an object"); !r) return r;
  if (auto r = Require(j.contains("schema") && j.at("schema") == kReportSchema,
                       "schema must be knoxsim.report/1");
      !r) {
    return r;
  }
  if (auto r = Require(j.contains("profile") && j.at("profile").is_string() &&
                           j.contains("seed") && j.at("seed").is_number_unsigned() &&
                           j.contains("results") && j.at("results").is_array() &&
                           j.contains("summary") && j.at("summary").is_object(),
                       "document needs profile, seed, results and summary");
      !r) {
    return r;
  }
  size_t matched = 0;
  for (const auto& item : j.at("results")) {
    auto report = ReportFromJson(item);
    if (!report) return Fail(report.error());
    if (!item.contains("expected") || !OutcomeFromJson(item.at("expected"))) {
      return Fail(IoError{"result needs an 'expected' outcome"});
    }
    if (!item.contains("matched") || !item.at("matched").is_boolean()) {
      return Fail(IoError{"result needs a boolean 'matched'"});
    }
    if (item.at("matched").get<bool>()) ++matched;
  }
  const json& summary = j.at("summary");
  const size_t total = j.at("results").size();
  if (summary.value("total", size_t{0}) != total || summary.value("matched", size_t{0}) != matched ||
      summary.value("mismatched", size_t{0}) != total - matched) {
    return Fail(IoError{"summary disagrees with results"});
  }
  return Ok();
}

}  // namespace knoxsim

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/profile_io.h"

#include <fstream>
#include <sstream>

namespace knoxsim {
namespace {

using nlohmann::json;

std::optional<KnoxVersion> ParseVersion(std::string_view text) {
  if (text == "1.0") return KnoxVersion::kV1_0;
  if (text == "2.3") return KnoxVersion::kV2_3;
  return std::nullopt;
}

std::optional<TrustletHost> ParseHost(std::string_view text) {
  if (text == "MobiCore") return TrustletHost::kMobiCore;
  if (text == "QSEE") return TrustletHost::kQsee;
  return std::nullopt;
}

struct FieldError {
  std::string message;
};

template <typename T>
T Field(const json& j, const char* key) {
  if (!j.contains(key)) throw FieldError{std::string("missing field '") + key + "'"};
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FieldError{std::string("wrong type for '") + key + "'"};
  }
}

template <typename T>
T Field(const json& j, const char* key, T fallback) {
  return j.contains(key) ? Field<T>(j, key) : fallback;
}

}  // namespace

nlohmann::ordered_json ProfileToJson(const DeviceProfile& p) {
  nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
  for (size_t i = 0; i < kBootComponentCount; ++i) {
    hashes[std::string(Name(static_cast<BootComponentId>(i)))] =
        ToHex(ByteView(p.firmware_hashes[i].data(), p.firmware_hashes[i].size()));
  }
  return {
      {"id", p.id},
      {"model", p.model},
      {"knox_version", Name(p.knox_version)},
      {"rkp_enabled", p.rkp_enabled},
      {"dm_verity_enabled", p.dm_verity_enabled},
      {"adb_enabled", p.adb_enabled},
      {"separate_cert_store", p.separate_cert_store},
      {"separate_keyboard", p.separate_keyboard},
      {"clipboard_sharing_policy", p.clipboard_sharing_policy},
      {"keystore_host", Name(p.keystore_host)},
      {"secure_storage_host", Name(p.secure_storage_host)},
      {"device_id", p.device_id},
      {"tima_key_in_tz", p.tima_key_in_tz},
      {"unmount_on_lock", p.unmount_on_lock},
      {"race_window_ticks", p.race_window_ticks},
      {"install_policy",
       {{"whitelist_enabled", p.install_policy.whitelist_enabled},
        {"whitelist", p.install_policy.whitelist},
        {"blacklist", p.install_policy.blacklist}}},
      {"system_block_count", p.system_block_count},
      {"critical_blocks", p.critical_blocks},
      {"firmware_hashes", hashes},
      {"attestation_public_key", ToHex(p.attestation_public_key)},
  };
}

Result<DeviceProfile, IoError> ProfileFromJson(const json& j) {
  if (!j.is_object()) return Fail(IoError{"profile must be a JSON object"});
  DeviceProfile p;
  try {
    p.id = Field<std::string>(j, "id");
    p.model = Field<std::string>(j, "model");
    auto version = ParseVersion(Field<std::string>(j, "knox_version"));
    if (!version) return Fail(IoError{"knox_version must be \"1.0\" or \"2.3\""});
    p.knox_version = *version;
    p.rkp_enabled = Field<bool>(j, "rkp_enabled");
    p.dm_verity_enabled = Field<bool>(j, "dm_verity_enabled");
    p.adb_enabled = Field<bool>(j, "adb_enabled");
    p.separate_cert_store = Field<bool>(j, "separate_cert_store");
    p.separate_keyboard = Field<bool>(j, "separate_keyboard");
    p.clipboard_sharing_policy = Field<bool>(j, "clipboard_sharing_policy", false);
    auto keystore = ParseHost(Field<std::string>(j, "keystore_host"));
    auto storage = ParseHost(Field<std::string>(j, "secure_storage_host"));
    if (!keystore || !storage) return Fail(IoError{"unknown trustlet host"});
    p.keystore_host = *keystore;
    p.secure_storage_host = *storage;
    p.device_id = Field<std::string>(j, "device_id");
    p.tima_key_in_tz = Field<bool>(j, "tima_key_in_tz", false);
    p.unmount_on_lock = Field<bool>(j, "unmount_on_lock", false);
    p.race_window_ticks = Field<int>(j, "race_window_ticks", 0);
    if (p.race_window_ticks < 0) return Fail(IoError{"race_window_ticks must be >= 0"});
    if (j.contains("install_policy")) {
      const json& policy = j.at("install_policy");
      if (!policy.is_object()) return Fail(IoError{"install_policy must be an object"});
      p.install_policy.whitelist_enabled = Field<bool>(policy, "whitelist_enabled", false);
      p.install_policy.whitelist =
          Field<std::set<std::string>>(policy, "whitelist", std::set<std::string>{});
      p.install_policy.blacklist =
          Field<std::set<std::string>>(policy, "blacklist", std::set<std::string>{});
    }
    p.system_block_count = Field<int>(j, "system_block_count", 8);
    p.critical_blocks = Field<std::set<int>>(j, "critical_blocks", std::set<int>{});
    const json& hashes = j.at("firmware_hashes");
    for (size_t i = 0; i < kBootComponentCount; ++i) {
      const std::string name(Name(static_cast<BootComponentId>(i)));
      auto digest = ArrayFromHex<32>(Field<std::string>(hashes, name.c_str()));
      if (!digest) return Fail(IoError{"firmware hash for " + name + " is not 64 hex digits"});
      p.firmware_hashes[i] = *digest;
    }
    auto key = FromHex(Field<std::string>(j, "attestation_public_key"));
    if (!key) return Fail(IoError{"attestation_public_key is not hex"});
    p.attestation_public_key = *key;
  } catch (const FieldError& e) {
    return Fail(IoError{e.message});
  } catch (const json::exception& e) {
    return Fail(IoError{e.what()});
  }
  if (auto valid = ValidateProfile(p); !valid) {
    return Fail(IoError{"profile '" + p.id + "' invalid: " + std::string(Name(valid.error()))});
  }
  return p;
}

Result<DeviceProfile, IoError> ParseProfile(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return Fail(IoError{"profile is not valid JSON"});
  return ProfileFromJson(j);
}

Result<DeviceProfile, IoError> LoadProfile(const std::filesystem::path& path) {
  auto text = ReadTextFile(path);
  if (!text) return Fail(text.error());
  auto profile = ParseProfile(*text);
  if (!profile) return Fail(IoError{path.string() + ": " + profile.error().message});
  return profile;
}

Result<std::string, IoError> ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Fail(IoError{"cannot open " + path.string()});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Status<IoError> WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Fail(IoError{"cannot write " + path.string()});
  out << text;
  if (!out) return Fail(IoError{"write failed for " + path.string()});
  return Ok();
}

}  // namespace knoxsim

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/network.h"

#include <algorithm>

#include "knoxsim/device.h"

namespace knoxsim {
namespace {

bool SameKey(const Certificate& a, const Certificate& b) {
  return a.subject == b.subject && a.public_key == b.public_key;
}

}  // namespace

Bytes Certificate::SignedPortion() const {
  Bytes out = ToBytes(subject);
  out.push_back(0);
  Append(out, ToBytes(issuer));
  out.push_back(0);
  Append(out, public_key);
  return out;
}

Certificate MakeSelfSigned(std::string subject, const crypto::SigningKey& key) {
  Certificate cert{subject, subject, key.public_key(), {}};
  cert.signature = key.Sign(cert.SignedPortion());
  return cert;
}

Certificate IssueCertificate(std::string subject, const Bytes& subject_key,
                             const Certificate& issuer,
                             const crypto::SigningKey& issuer_key) {
  Certificate cert{std::move(subject), issuer.subject, subject_key, {}};
  cert.signature = issuer_key.Sign(cert.SignedPortion());
  return cert;
}

const crypto::SigningKey& SystemRootKey() {
  static const crypto::SigningKey key =
      crypto::SigningKey::FromSeed(crypto::Sha256(ToBytes("knoxsim system root ca")));
  return key;
}

const Certificate& SystemRootCa() {
  static const Certificate cert = MakeSelfSigned("CN=Simulated Global Root CA",
                                                 SystemRootKey());
  return cert;
}

std::vector<Certificate> CertStore::VisibleRoots(Env env) const {
  std::vector<Certificate> out = system_roots;
  const Env pool = scope == CertScope::kShared ? Env::kUser : env;
  if (auto it = user_installed.find(pool); it != user_installed.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::string_view Name(TlsVerdict verdict) {
  return verdict == TlsVerdict::kTrusted ? "Trusted" : "Untrusted";
}

std::string_view Name(VpnError error) {
  switch (error) {
    case VpnError::kDenied:
      return "Denied";
    case VpnError::kMissingPermission:
      return "MissingPermission";
    case VpnError::kNoSuchProcess:
      return "NoSuchProcess";
  }
  return "?";
}

void CertInstall(DeviceState& device, Env env, const Certificate& cert) {
  const Env pool = device.certs.scope == CertScope::kShared ? Env::kUser : env;
  auto& certs = device.certs.user_installed[pool];
  if (std::find(certs.begin(), certs.end(), cert) == certs.end()) certs.push_back(cert);
  Log(device, "cert_install " + cert.subject + " into " + std::string(Name(env)));
}

Result<TlsVerdict, TlsError> TlsValidate(const DeviceState& device, Env env,
                                         const std::vector<Certificate>& chain) {
  if (chain.empty()) return Fail(TlsError::kMalformedChain);
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    if (chain[i].issuer != chain[i + 1].subject) return Fail(TlsError::kMalformedChain);
    if (!crypto::VerifySignature(chain[i + 1].public_key, chain[i].SignedPortion(),
                                 chain[i].signature)) {
      return TlsVerdict::kUntrusted;
    }
  }
  const Certificate& root = chain.back();
  if (root.issuer != root.subject) return Fail(TlsError::kMalformedChain);
  if (!crypto::VerifySignature(root.public_key, root.SignedPortion(), root.signature)) {
    return TlsVerdict::kUntrusted;
  }
  for (const auto& anchor : device.certs.VisibleRoots(env)) {
    if (SameKey(anchor, root)) return TlsVerdict::kTrusted;
  }
  return TlsVerdict::kUntrusted;
}

Status<VpnError> VpnRegister(DeviceState& device, Pid app, bool user_granted) {
  const Process* p = device.processes.Get(app);
  if (!p) return Fail(VpnError::kNoSuchProcess);
  const InstalledApp* installed = device.apps.Find(p->env, p->package);
  if (!installed || !installed->granted.contains(Permission::kVpn)) {
    return Fail(VpnError::kMissingPermission);
  }
  if (!user_granted) return Fail(VpnError::kDenied);
  std::erase_if(device.vpn.active, [&](const auto& r) { return r.app == app; });
  VpnRegistration reg{app, p->name, std::nullopt};
  if (device.profile.knox_version == KnoxVersion::kV2_3) reg.scope = p->env;
  device.vpn.active.push_back(reg);
  Log(device, "vpn_register " + p->name);
  return Ok();
}

Route RouteFlow(const DeviceState& device, const Flow& flow) {
  for (const auto& reg : device.vpn.active) {
    if (!reg.scope || *reg.scope == flow.source) return Route{reg.app_name};
  }
  return Route{};
}

}  // namespace knoxsim

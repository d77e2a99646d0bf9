// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

// Certificate stores, chain-of-trust validation and VPN routing.

#ifndef KNOXSIM_NETWORK_H_
#define KNOXSIM_NETWORK_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knoxsim/bytes.h"
#include "knoxsim/common.h"
#include "knoxsim/crypto.h"
#include "knoxsim/result.h"

namespace knoxsim {

struct DeviceState;

// Minimal X.509 stand-in: an Ed25519 signature by the issuer over
// (subject, issuer, public key).
struct Certificate {
  std::string subject;
  std::string issuer;
  Bytes public_key;
  Bytes signature;

  Bytes SignedPortion() const;
  bool operator==(const Certificate&) const = default;
};

Certificate MakeSelfSigned(std::string subject, const crypto::SigningKey& key);
Certificate IssueCertificate(std::string subject, const Bytes& subject_key,
                             const Certificate& issuer,
                             const crypto::SigningKey& issuer_key);

// Root CAs that ship with the firmware and the keys behind them.
const Certificate& SystemRootCa();
const crypto::SigningKey& SystemRootKey();

enum class CertScope { kShared, kPerEnvironment };

struct CertStore {
  CertScope scope = CertScope::kShared;
  std::vector<Certificate> system_roots;
  // Keyed by environment. Shared scope uses only the kUser pool.
  std::map<Env, std::vector<Certificate>> user_installed;

  // Every root `env` trusts.
  std::vector<Certificate> VisibleRoots(Env env) const;
};

// Needs UI interaction on the device when installing into the user pool.
void CertInstall(DeviceState& device, Env env, const Certificate& cert);

enum class TlsVerdict { kTrusted, kUntrusted };
enum class TlsError { kMalformedChain };

std::string_view Name(TlsVerdict verdict);

// chain[0] is the leaf; each element is issued by the next.
Result<TlsVerdict, TlsError> TlsValidate(const DeviceState& device, Env env,
                                         const std::vector<Certificate>& chain);

struct VpnRegistration {
  Pid app;
  std::string app_name;
  // Global in 1.0; the registering app's environment in 2.3.
  std::optional<Env> scope;
};

struct VpnState {
  std::vector<VpnRegistration> active;
};

enum class VpnError { kDenied, kMissingPermission, kNoSuchProcess };

std::string_view Name(VpnError error);

Status<VpnError> VpnRegister(DeviceState& device, Pid app, bool user_granted);

struct Flow {
  Env source;
  std::string destination;
};

struct Route {
  // Empty means direct.
  std::string via_vpn;

  bool direct() const { return via_vpn.empty(); }
  bool operator==(const Route&) const = default;
};

Route RouteFlow(const DeviceState& device, const Flow& flow);

}  // namespace knoxsim

#endif  // KNOXSIM_NETWORK_H_

// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/container_crypto.h"
#include "knoxsim/crypto.h"

namespace knoxsim {

std::string HashPasswordCurrent(std::string_view password,
                                std::string_view salt) {
  const Bytes salted = ToBytes(std::string(password) + std::string(salt));
  crypto::Sha1Hasher sha1;
  Bytes digest;
  for (int i = 0; i < 1024; ++i) {
    if (!digest.empty()) sha1.Update(digest);
    sha1.Update(static_cast<uint8_t>(i));
    sha1.Update(salted);
    digest = sha1.Digest();
  }
  return ToHex(digest);
}

std::string HashPasswordLegacy(std::string_view password,
                               std::string_view salt) {
  const Bytes salted = ToBytes(std::string(password) + std::string(salt));
  return ToHex(crypto::Sha1(salted)) + ToHex(crypto::Md5(salted));
}

Result<bool, PasswordError> VerifyPassword(const PasswordRecord& record,
                                           std::string_view password) {
  std::string candidate;
  switch (record.stored_hash.size()) {
    case kCurrentHashLength:
      candidate = HashPasswordCurrent(password, record.salt);
      break;
    case kLegacyHashLength:
      candidate = HashPasswordLegacy(password, record.salt);
      break;
    default:
      return Fail(PasswordError::kMalformedRecord);
  }
  return crypto::ConstantTimeEqual(ToBytes(candidate), ToBytes(record.stored_hash));
}

}  // namespace knoxsim

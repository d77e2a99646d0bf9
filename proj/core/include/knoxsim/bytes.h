// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef KNOXSIM_BYTES_H_
#define KNOXSIM_BYTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace knoxsim {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

// 32-byte symmetric key material (TIMA key, DEK, AES-256 keys).
using Key256 = std::array<uint8_t, 32>;

Bytes ToBytes(std::string_view text);
std::string ToString(ByteView bytes);

// Lowercase hex.
std::string ToHex(ByteView bytes);
std::optional<Bytes> FromHex(std::string_view hex);

template <size_t N>
std::optional<std::array<uint8_t, N>> ArrayFromHex(std::string_view hex) {
  auto bytes = FromHex(hex);
  if (!bytes || bytes->size() != N) return std::nullopt;
  std::array<uint8_t, N> out;
  std::copy(bytes->begin(), bytes->end(), out.begin());
  return out;
}

void Append(Bytes& out, ByteView tail);

// True iff `needle` occurs as a contiguous run inside `haystack`.
bool ContainsSubsequence(ByteView haystack, ByteView needle);

}  // namespace knoxsim

#endif  // KNOXSIM_BYTES_H_

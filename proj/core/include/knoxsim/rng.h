// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef KNOXSIM_RNG_H_
#define KNOXSIM_RNG_H_

#include <array>
#include <cstdint>
#include <random>

#include "knoxsim/bytes.h"

namespace knoxsim {

// Seeded generator behind every random value in a simulated device. The
// mt19937_64 output sequence is fixed by the standard, and bounded draws use
// our own rejection sampling, so a seed replays identically everywhere.
class DeterministicRng {
 public:
  explicit DeterministicRng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  uint64_t Uniform(uint64_t bound);

  Bytes NextBytes(size_t count);

  template <size_t N>
  std::array<uint8_t, N> NextArray() {
    std::array<uint8_t, N> out;
    Fill(out.data(), N);
    return out;
  }

 private:
  void Fill(uint8_t* out, size_t count);

  std::mt19937_64 engine_;
};

}  // namespace knoxsim

#endif  // KNOXSIM_RNG_H_

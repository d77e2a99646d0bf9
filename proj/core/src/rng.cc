// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "knoxsim/rng.h"

#include <cassert>
#include <limits>

namespace knoxsim {

uint64_t DeterministicRng::Uniform(uint64_t bound) {
  assert(bound != 0);
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      std::numeric_limits<uint64_t>::max() % bound;
  uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

Bytes DeterministicRng::NextBytes(size_t count) {
  Bytes out(count);
  Fill(out.data(), count);
  return out;
}

void DeterministicRng::Fill(uint8_t* out, size_t count) {
  size_t i = 0;
  while (i < count) {
    uint64_t word = engine_();
    for (int b = 0; b < 8 && i < count; ++b, ++i) {
      out[i] = static_cast<uint8_t>(word >> (8 * b));
    }
  }
}

}  // namespace knoxsim

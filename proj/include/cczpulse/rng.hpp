/* Copyright 2026 The CCZPulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace cczpulse::rng {

// All stochastic code in this library draws through these helpers instead of
// std:: distributions, whose output sequences are implementation-defined.
// One mt19937_64 master stream therefore yields identical traces on any
// toolchain and regardless of evaluation parallelism.

/// Uniform double in [0, 1) with 53 random mantissa bits. One engine call.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi). One engine call.
inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Uniform integer in [0, n). n <= 1 returns 0 and consumes no randomness.
inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
  if (n <= 1) return 0;
  constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;  // rejection threshold, unbiased
  std::uint64_t r;
  do {
    r = gen();
  } while (r >= limit);
  return r % n;
}

}  // namespace cczpulse::rng

// Copyright 2026 The DP Trade-off Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPTRADEOFF_RANDOM_H_
#define DPTRADEOFF_RANDOM_H_

#include <cstdint>
#include <random>

namespace dptradeoff {

using Rng = std::mt19937_64;

// Well-known stream ids so that independent consumers of one seed never share
// a random sequence.
enum class Stream : uint64_t {
  kTruth = 1,
  kUser = 2,
  kOracle = 3,
  kLearner = 4,
};

// Returns a generator whose sequence depends only on (seed, stream).
inline Rng DeriveRng(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

inline Rng DeriveRng(uint64_t seed, Stream stream) {
  return DeriveRng(seed, static_cast<uint64_t>(stream));
}

// Draws a fresh 64-bit seed from `rng`; used to fan out per-candidate streams.
inline uint64_t NextSeed(Rng& rng) { return rng(); }

}  // namespace dptradeoff

#endif  // DPTRADEOFF_RANDOM_H_

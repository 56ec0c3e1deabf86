// Copyright 2026 The tcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCQ_HASH_H
#define TCQ_HASH_H

#include <cstdint>

namespace tcq {

// SplitMix64 finalizer. Used as a counter-based generator: every random draw
// in the simulator is a pure function of (seed, key), never of call order.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t hash_combine(uint64_t seed, uint64_t key) {
    return splitmix64(seed ^ splitmix64(key));
}

constexpr uint64_t pack_coords(int x, int y, int z) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(x)) & 0x1FFFFF) |
           ((static_cast<uint64_t>(static_cast<uint32_t>(y)) & 0x1FFFFF) << 21) |
           ((static_cast<uint64_t>(static_cast<uint32_t>(z)) & 0x1FFFFF) << 42);
}

/// Maps a 64-bit hash to a double uniform on [0, 1).
constexpr double to_unit_interval(uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Domain separators so that the error, baseline and outcome streams drawn from
// the same user seed are independent.
inline constexpr uint64_t kErrorStream = 0x6572726f72ULL;
inline constexpr uint64_t kBaselineStream = 0x626173656cULL;
inline constexpr uint64_t kOutcomeStream = 0x6f7574636fULL;
inline constexpr uint64_t kTrialStream = 0x747269616cULL;

}  // namespace tcq

#endif  // TCQ_HASH_H

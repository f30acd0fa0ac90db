// Copyright 2026 The toric-memory Authors
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

#ifndef TORIC_RNG_H
#define TORIC_RNG_H

#include <cmath>
#include <cstdint>
#include <random>

namespace toric {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to turn (seed, stream, index) triples into independent seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives the seed of task `index` in named stream `stream` from a master seed.
/// Pure function of its arguments; no global state.
inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index) {
    return mix64(mix64(master ^ mix64(stream)) + index);
}

/// Uniform double in [0, 1) built from the top 53 bits.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponentially distributed waiting time with the given total rate.
inline double exponential(Rng &rng, double rate) {
    return -std::log1p(-uniform01(rng)) / rate;
}

}  // namespace toric

#endif

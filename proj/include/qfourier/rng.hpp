// Copyright 2026 The qfourier Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Portable random streams. std::mt19937_64 is fully specified by the
// standard; the distribution helpers below are written out so that the
// drawn values do not depend on the standard library implementation.

#include <cstdint>
#include <random>

namespace qfourier {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

/// Seed for an independent stream identified by (seed, tag, a, b).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t a = 0,
                                    std::uint64_t b = 0) noexcept {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ tag);
    h = mix64(h ^ a);
    return mix64(h ^ b);
}

/// Stream tags; one per consumer of randomness.
enum class Stream : std::uint64_t {
    Split = 0x5311,
    Init = 0x1417,
    Shots = 0x5407,
    Subset = 0x5B5E,
};

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t a = 0,
                    std::uint64_t b = 0) {
    return Rng(derive_seed(seed, static_cast<std::uint64_t>(stream), a, b));
}

/// SplitMix64 generator; cheap to seed, used for per-shot streams.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return UINT64_MAX; }
    result_type operator()() noexcept {
        const std::uint64_t out = mix64(state_);
        state_ += 0x9E3779B97F4A7C15ULL;
        return out;
    }

  private:
    std::uint64_t state_;
};

/// Uniform double in [0, 1) from the top 53 bits.
template <class Gen>
inline double uniform01(Gen &rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n > 0.
template <class Gen>
inline std::uint64_t uniform_index(Gen &rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r = rng();
    while (r >= limit) {
        r = rng();
    }
    return r % n;
}

} // namespace qfourier

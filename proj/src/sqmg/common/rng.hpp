// Copyright 2026 The SQMG Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace sqmg {

/// Mixes a 64-bit value (SplitMix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent 64-bit seed for substream `index` of `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Random source for one shot (or one optimizer run). Streams are keyed by
/// (seed, index) so results never depend on the order in which shots run.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() noexcept { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept {
        // Rejection sampling, no modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) {
            v = engine_();
        }
        return v % n;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace sqmg

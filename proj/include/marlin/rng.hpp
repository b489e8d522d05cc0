/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MARLIN_RNG_HPP
#define MARLIN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace marlin {

/// Deterministic random stream (xoshiro256++ seeded through splitmix64).
///
/// The standard-library distributions are implementation defined, so every
/// transform used here is spelled out; a given seed yields the same sequence
/// on any platform. Independent substreams are derived by hashing the parent
/// seed with a list of tags, which keeps parallel consumers reproducible
/// regardless of scheduling.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
        has_cached_normal_ = false;
        cached_normal_ = 0.0;
    }

    /// Child stream fully determined by (seed, tags...).
    static RngStream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
        std::uint64_t h = seed;
        for (std::uint64_t t : tags) {
            h ^= splitmix64(t + 0x9e3779b97f4a7c15ULL);
            h = splitmix64(h);
        }
        return RngStream(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // guard against log(0)
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(t);
        has_cached_normal_ = true;
        return r * std::cos(t);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t splitmix64(std::uint64_t&& x) {
        std::uint64_t v = x;
        return splitmix64(v);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
    bool has_cached_normal_;
    double cached_normal_;
};

}  // namespace marlin

#endif

// SPDX-License-Identifier: Apache-2.0
//
// d2dmam: C++ library and simulation CLI for D2D-aided multi-antenna
// multicasting.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef D2DMAM_RNG_HPP
#define D2DMAM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace d2dmam {

/// splitmix64 finalizer; bijective 64-bit mixing.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic pseudo-random stream (xoshiro256++), seeded by a
/// splitmix64 expansion of a 64-bit key. Streams for distinct keys are
/// statistically independent, which makes per-trial streams derived from
/// (master_seed, trial_index) safe to consume in any execution order.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) {
        std::uint64_t sm = key;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    /// Counter-based split: the stream for one Monte-Carlo trial.
    static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
        return RngStream(mix64(master_seed ^ mix64(trial_index + 0x632be59bd9b4e019ULL)));
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

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        // Lemire's multiply-shift with rejection; unbiased and deterministic.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Pair of independent standard normals (Box-Muller).
    void next_normal_pair(double& z0, double& z1) {
        const double u1 = next_double();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        z0 = radius * std::cos(angle);
        z1 = radius * std::sin(angle);
    }

    double next_normal() {
        double z0 = 0.0, z1 = 0.0;
        next_normal_pair(z0, z1);
        return z0;
    }

    /// Circularly-symmetric complex normal, unit variance: E[|z|^2] = 1.
    std::complex<double> next_cnormal() {
        double z0 = 0.0, z1 = 0.0;
        next_normal_pair(z0, z1);
        return {z0 * 0.7071067811865475244, z1 * 0.7071067811865475244};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
};

}  // namespace d2dmam

#endif  // D2DMAM_RNG_HPP

// Copyright 2026 The phasetrack authors
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

#ifndef PHASETRACK_RNG_HPP
#define PHASETRACK_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace phasetrack {

/// Deterministic seeded random streams.
///
/// All randomness in the simulator flows through these generators so that a
/// run is reproducible bit-for-bit from a single 64-bit master seed,
/// independent of platform and standard-library version (std::normal_distribution
/// is implementation-defined and is deliberately not used).
///
/// Sub-streams are derived from the master seed by a splittable construction:
/// stream id = FNV-1a hash of a module tag, combined with a chunk index
/// through SplitMix64. Chunks are independent, so long traces can be
/// synthesized out of order (or in parallel) and still reproduce exactly.

struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256++ (Blackman & Vigna). State seeded via SplitMix64.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<uint64_t, 4> s_;
};

/// Standard-normal stream using the trigonometric Box-Muller transform.
/// Two uniforms always yield two normals (no rejection), so the consumption
/// pattern is fixed and the stream is splittable at any even draw count.
class GaussianStream {
 public:
  explicit GaussianStream(uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = gen_.uniform01();
    double u2 = gen_.uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  Xoshiro256pp gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline constexpr uint64_t fnv1a64(std::string_view text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Sub-seed for (master seed, stream tag, chunk index).
inline uint64_t derive_seed(uint64_t master, std::string_view stream_tag, uint64_t chunk_index) {
  SplitMix64 sm(master ^ fnv1a64(stream_tag));
  const uint64_t base = sm.next();
  SplitMix64 mix(base + (chunk_index + 1) * 0x9E3779B97F4A7C15ULL);
  return mix.next();
}

}  // namespace phasetrack

#endif

// Copyright 2026 The zkfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZKFUZZ_RANDOM_H_
#define ZKFUZZ_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace zkfuzz {

using Rng = std::mt19937_64;

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent sub-seed for stream `stream` of `seed`.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(SplitMix64(seed) ^ SplitMix64(stream + 0x5851F42D4C957F2Dull));
}

inline std::size_t UniformIndex(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline std::uint32_t UniformWord(Rng& rng) {
  return static_cast<std::uint32_t>(rng() >> 32);
}

inline double Uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool Bernoulli(Rng& rng, double p) { return Uniform01(rng) < p; }

}  // namespace zkfuzz

#endif  // ZKFUZZ_RANDOM_H_

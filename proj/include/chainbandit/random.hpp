// Copyright 2026 The Authors.
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

#ifndef CHAINBANDIT_RANDOM_HPP_
#define CHAINBANDIT_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace chainbandit {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; decorrelates nearby seeds before they reach the engine.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent engine for replicate `stream` of a run seeded with `seed`.
// Draws depend only on (seed, stream), never on scheduling order.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix_seed(seed)),
                    static_cast<std::uint32_t>(mix_seed(seed) >> 32),
                    static_cast<std::uint32_t>(mix_seed(stream ^ 0x5bd1e995ULL)),
                    static_cast<std::uint32_t>(mix_seed(stream) >> 32)};
  return Rng(seq);
}

inline std::vector<double> standard_normals(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& z : out) z = normal(rng);
  return out;
}

}  // namespace chainbandit

#endif  // CHAINBANDIT_RANDOM_HPP_

// Copyright 2026 The histfilter Authors
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

#ifndef HISTFILTER_RNG_H_
#define HISTFILTER_RNG_H_

#include <cstdint>
#include <random>

namespace histfilter {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
inline std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combination of two 64-bit values.
inline std::uint64_t HashCombine(std::uint64_t h, std::uint64_t v) {
  return Mix64(h ^ Mix64(v + 0x632be59bd9b4e019ULL));
}

// Seed for stream `stream` (chain id, replicate index, ...) of a run seeded
// with `seed`. Streams from the same seed are decorrelated by the mixer.
inline std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t stream) {
  return Mix64(Mix64(seed) ^ Mix64(stream + 0xd1b54a32d192ed03ULL));
}

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(StreamSeed(seed, stream));
}

inline double UniformReal(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace histfilter

#endif  // HISTFILTER_RNG_H_

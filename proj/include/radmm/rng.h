//
// Copyright 2026 The R-ADMM Toolkit Authors
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
//

#ifndef RADMM_RNG_H_
#define RADMM_RNG_H_

#include <cstdint>
#include <random>

namespace radmm {

// Independent random streams keyed by (seed, purpose, node, index), so that
// a draw never depends on which worker thread executes it.
enum class StreamPurpose : std::uint64_t {
  kInitialPrimal = 1,
  kNoise = 2,
};

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t StreamSeed(std::uint64_t seed, StreamPurpose purpose,
                                std::uint64_t node, std::uint64_t index) {
  std::uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(purpose));
  h = SplitMix64(h ^ node);
  return SplitMix64(h ^ index);
}

inline std::mt19937_64 MakeStream(std::uint64_t seed, StreamPurpose purpose,
                                  std::uint64_t node, std::uint64_t index) {
  return std::mt19937_64(StreamSeed(seed, purpose, node, index));
}

}  // namespace radmm

#endif  // RADMM_RNG_H_

// Copyright 2026 The CRE Simulator Authors
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

#ifndef CRE_RNG_H_
#define CRE_RNG_H_

#include <cstdint>
#include <random>

namespace cre {

using Rng = std::mt19937_64;

// Independent substreams derived from one master seed, so changing how many
// draws one consumer makes never perturbs another.
enum class Stream : std::uint64_t {
  kPlacement = 1,
  kChannel = 2,
  kData = 3,
  kAnnealing = 4,
  kInnerInit = 5,
  kBaseline = 6,
};

inline Rng MakeRng(std::uint64_t master_seed, Stream stream, std::uint64_t replicate = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return Rng(seq);
}

}  // namespace cre

#endif  // CRE_RNG_H_

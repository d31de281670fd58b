// Copyright 2026 The Bonsai Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bonsai/alphabet.hpp"

namespace bonsai {

struct SplitMix64Step {
  std::uint64_t output;
  std::uint64_t next_state;
};

// One step of SplitMix64 (Steele, Lea and Flood). Bit-exact with the
// published reference, so any reimplementation regenerates the same
// deletion positions from a stored seed.
constexpr SplitMix64Step splitmix64_next(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return {z ^ (z >> 31), state};
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    const auto step = splitmix64_next(state_);
    state_ = step.next_state;
    return step.output;
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

// `count` distinct positions in [0, n_o), in generation order: draw
// u mod n_o from the SplitMix64 stream seeded with `seed`, skipping values
// already emitted.
std::vector<std::size_t> deletion_positions(Seed seed, std::size_t n_o, std::size_t count);

}  // namespace bonsai

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

#include "bonsai/prng.hpp"

#include <string>

#include "bonsai/error.hpp"
#include "bonsai/instrument.hpp"

namespace bonsai {

std::vector<std::size_t> deletion_positions(Seed seed, std::size_t n_o, std::size_t count) {
  if (count > n_o) {
    fail(ErrorKind::kParameter, "cannot pick " + std::to_string(count) +
                                    " distinct positions out of " + std::to_string(n_o));
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  std::vector<bool> taken(n_o, false);
  SplitMix64 rng(seed.value);
  while (out.size() < count) {
    const auto candidate = static_cast<std::size_t>(rng() % n_o);
    instrument::tick();
    if (taken[candidate]) continue;
    taken[candidate] = true;
    out.push_back(candidate);
  }
  return out;
}

}  // namespace bonsai

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

#include "bonsai/alphabet.hpp"

namespace bonsai {

// First-order Markov source. Each symbol has its own random successor
// ranking; the j-th ranked successor has weight decay^j. Smaller decay gives
// lower entropy and stronger correlation.
struct MarkovCorpusOptions {
  unsigned k = 8;
  double decay = 0.5;
  std::uint64_t seed = 1;
};

SymbolString markov_corpus(std::size_t symbols, const MarkovCorpusOptions& options);

// Entropy rate of the source in bits per symbol under its stationary law.
double markov_entropy_rate(const MarkovCorpusOptions& options);

}  // namespace bonsai

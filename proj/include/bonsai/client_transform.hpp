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
#include <random>
#include <span>
#include <vector>

#include "bonsai/alphabet.hpp"

namespace bonsai {

// D: everything the client keeps locally to rebuild F from O.
struct ClientDeviation {
  FileId file_id;
  Seed seed;
  bool inverted = false;
  // Deleted symbols in the order the PRNG emitted their positions. Never
  // inverted, even when the outsource is.
  SymbolString deleted_values;

  bool operator==(const ClientDeviation&) const = default;
};

struct DeletionResult {
  SymbolString remaining;
  SymbolString deleted;  // in the order the positions were supplied
};

// Removes the symbols at the given original-index positions simultaneously.
DeletionResult delete_at(std::span<const Symbol> chunk, std::span<const std::size_t> positions);

// Maps every symbol i to 2^k - 1 - i.
SymbolString invert(std::span<const Symbol> symbols, unsigned k);

// Empirical symbol frequencies (#i / length) over the 2^k alphabet.
SymbolDistribution frequency(std::span<const Symbol> symbols, unsigned k);

// Euclidean distance between two distributions over the same alphabet.
double policy_distance(const SymbolDistribution& freq, const SymbolDistribution& policy);

struct TransformResult {
  Outsource outsource;
  ClientDeviation deviation;
  std::size_t chosen_seed_index = 0;
  double distance = 0;
};

// T(F) -> (O, D). Each seed yields a deletion candidate and its inverted twin;
// the candidate closest to the policy distribution wins. Ties go to the
// lowest seed index, and the plain candidate beats its inverted twin.
TransformResult transform(std::span<const Symbol> chunk, const Policy& policy,
                          std::span<const Seed> seeds, const SystemConfig& config,
                          FileId file_id);

// Inverse used by Get: undo the invert, then reinsert the deleted values at
// the positions regenerated from the seed.
Chunk reconstruct(std::span<const Symbol> outsource, const ClientDeviation& deviation,
                  const SystemConfig& config);

// `t` pairwise-distinct seeds drawn from `rng`.
template <typename Rng>
std::vector<Seed> draw_seeds(std::size_t t, Rng& rng) {
  std::vector<Seed> seeds;
  seeds.reserve(t);
  std::uniform_int_distribution<std::uint64_t> dist;
  while (seeds.size() < t) {
    const Seed s{dist(rng)};
    bool dup = false;
    for (const auto& x : seeds) dup = dup || x == s;
    if (!dup) seeds.push_back(s);
  }
  return seeds;
}

// Local deviation-store record: file_id u64 LE, seed u64 LE, invert u8,
// count u32 LE, then the deleted values packed with pack_symbols.
std::vector<std::uint8_t> encode_deviation(const ClientDeviation& deviation, unsigned k);
// Decodes one record starting at `bytes`; `consumed` receives its length.
ClientDeviation decode_deviation(std::span<const std::uint8_t> bytes, unsigned k,
                                 std::size_t* consumed = nullptr);
std::size_t encoded_deviation_size(std::size_t deleted_count, unsigned k);

}  // namespace bonsai

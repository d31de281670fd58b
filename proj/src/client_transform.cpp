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

#include "bonsai/client_transform.hpp"

#include <cmath>
#include <string>

#include "bonsai/byte_io.hpp"
#include "bonsai/error.hpp"
#include "bonsai/instrument.hpp"
#include "bonsai/prng.hpp"

namespace bonsai {
namespace {

__extension__ typedef unsigned __int128 Wide;

// n_b^2 * T^2 * distance^2, computed exactly: sum_i (c_i * T - w_i * n_b)^2.
Wide scaled_squared_distance(std::span<const std::uint64_t> counts, std::uint64_t length,
                             const SymbolDistribution& policy, bool reversed) {
  const std::size_t n = counts.size();
  Wide sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t c = reversed ? counts[n - 1 - i] : counts[i];
    const Wide a = Wide{c} * policy.total();
    const Wide b = Wide{policy.weight(i)} * length;
    const Wide d = a > b ? a - b : b - a;
    sum += d * d;
  }
  instrument::tick(n);
  return sum;
}

}  // namespace

DeletionResult delete_at(std::span<const Symbol> chunk, std::span<const std::size_t> positions) {
  std::vector<bool> drop(chunk.size(), false);
  DeletionResult r;
  r.deleted.reserve(positions.size());
  for (auto p : positions) {
    if (p >= chunk.size()) {
      fail(ErrorKind::kParameter, "deletion position " + std::to_string(p) +
                                      " outside chunk of " + std::to_string(chunk.size()));
    }
    if (drop[p]) fail(ErrorKind::kParameter, "duplicate deletion position " + std::to_string(p));
    drop[p] = true;
    r.deleted.push_back(chunk[p]);
  }
  r.remaining.reserve(chunk.size() - positions.size());
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    if (!drop[i]) r.remaining.push_back(chunk[i]);
  }
  instrument::tick(chunk.size() + positions.size());
  return r;
}

SymbolString invert(std::span<const Symbol> symbols, unsigned k) {
  const unsigned top = (1u << k) - 1;
  SymbolString out(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out[i] = static_cast<Symbol>(top - symbols[i]);
  }
  instrument::tick(symbols.size());
  return out;
}

SymbolDistribution frequency(std::span<const Symbol> symbols, unsigned k) {
  if (symbols.empty()) fail(ErrorKind::kParameter, "frequency of an empty string");
  std::vector<std::uint64_t> counts(std::size_t{1} << k, 0);
  for (Symbol s : symbols) {
    if (s >= counts.size()) fail(ErrorKind::kRange, "symbol outside the alphabet");
    ++counts[s];
  }
  return SymbolDistribution::from_weights(std::move(counts));
}

double policy_distance(const SymbolDistribution& freq, const SymbolDistribution& policy) {
  if (freq.size() != policy.size()) {
    fail(ErrorKind::kParameter, "distributions over different alphabets (" +
                                    std::to_string(freq.size()) + " vs " +
                                    std::to_string(policy.size()) + ")");
  }
  double sum = 0;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double d = freq.probability(i) - policy.probability(i);
    sum += d * d;
  }
  return std::sqrt(sum);
}

TransformResult transform(std::span<const Symbol> chunk, const Policy& policy,
                          std::span<const Seed> seeds, const SystemConfig& config,
                          FileId file_id) {
  config.validate();
  if (chunk.size() != config.n_o) {
    fail(ErrorKind::kParameter, "chunk has " + std::to_string(chunk.size()) +
                                    " symbols, expected n_o=" + std::to_string(config.n_o));
  }
  if (seeds.size() != config.t) {
    fail(ErrorKind::kParameter, "expected t=" + std::to_string(config.t) + " seeds, got " +
                                    std::to_string(seeds.size()));
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) fail(ErrorKind::kParameter, "seeds must be pairwise distinct");
    }
  }
  if (policy.distribution.size() != config.alphabet_size()) {
    fail(ErrorKind::kParameter, "policy distribution does not cover the alphabet");
  }
  if (policy.n_b != config.n_b) fail(ErrorKind::kParameter, "policy n_b differs from config n_b");
  if (Wide{policy.distribution.total()} * config.n_b > (Wide{1} << 62)) {
    fail(ErrorKind::kRange, "policy total too large for exact distance comparison");
  }

  const std::size_t n_del = config.n_del();
  std::vector<std::uint64_t> counts(config.alphabet_size());
  bool have_best = false;
  Wide best = 0;
  std::size_t best_seed = 0;
  bool best_inverted = false;
  DeletionResult best_cut;

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const auto positions = deletion_positions(seeds[s], config.n_o, n_del);
    auto cut = delete_at(chunk, positions);
    std::fill(counts.begin(), counts.end(), 0);
    for (Symbol x : cut.remaining) {
      if (x >= counts.size()) fail(ErrorKind::kRange, "chunk symbol outside the alphabet");
      ++counts[x];
    }
    instrument::tick(cut.remaining.size());
    // The inverted twin's histogram is the plain histogram read backwards.
    // Strict comparison in evaluation order gives the documented tie-break.
    bool improved = false;
    for (bool inv : {false, true}) {
      const Wide d = scaled_squared_distance(counts, config.n_b, policy.distribution, inv);
      if (!have_best || d < best) {
        have_best = true;
        best = d;
        best_seed = s;
        best_inverted = inv;
        improved = true;
      }
    }
    if (improved) best_cut = std::move(cut);
  }

  TransformResult r;
  r.chosen_seed_index = best_seed;
  r.outsource = best_inverted ? invert(best_cut.remaining, config.k) : std::move(best_cut.remaining);
  r.deviation.file_id = file_id;
  r.deviation.seed = seeds[best_seed];
  r.deviation.inverted = best_inverted;
  r.deviation.deleted_values = std::move(best_cut.deleted);
  r.distance = policy_distance(frequency(r.outsource, config.k), policy.distribution);
  return r;
}

Chunk reconstruct(std::span<const Symbol> outsource, const ClientDeviation& deviation,
                  const SystemConfig& config) {
  const std::size_t n_del = config.n_o - config.n_b;
  if (outsource.size() != config.n_b || deviation.deleted_values.size() != n_del) {
    fail(ErrorKind::kDecode, "deviation inconsistent with outsource: |O|=" +
                                 std::to_string(outsource.size()) + " deleted=" +
                                 std::to_string(deviation.deleted_values.size()) +
                                 " for n_o=" + std::to_string(config.n_o) +
                                 " n_b=" + std::to_string(config.n_b));
  }
  const auto positions = deletion_positions(deviation.seed, config.n_o, n_del);
  Chunk out(config.n_o);
  std::vector<bool> filled(config.n_o, false);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out[positions[i]] = deviation.deleted_values[i];
    filled[positions[i]] = true;
  }
  const unsigned top = (1u << config.k) - 1;
  std::size_t next = 0;
  for (std::size_t i = 0; i < config.n_o; ++i) {
    if (filled[i]) continue;
    const Symbol s = outsource[next++];
    out[i] = deviation.inverted ? static_cast<Symbol>(top - s) : s;
  }
  instrument::tick(config.n_o + n_del);
  return out;
}

std::size_t encoded_deviation_size(std::size_t deleted_count, unsigned k) {
  return 8 + 8 + 1 + 4 + packed_size(deleted_count, k);
}

std::vector<std::uint8_t> encode_deviation(const ClientDeviation& deviation, unsigned k) {
  ByteWriter w;
  w.u64(deviation.file_id.value);
  w.u64(deviation.seed.value);
  w.u8(deviation.inverted ? 1 : 0);
  w.u32(static_cast<std::uint32_t>(deviation.deleted_values.size()));
  w.bytes(pack_symbols(deviation.deleted_values, k));
  return w.take();
}

ClientDeviation decode_deviation(std::span<const std::uint8_t> bytes, unsigned k,
                                 std::size_t* consumed) {
  ByteReader r(bytes);
  ClientDeviation d;
  d.file_id = FileId{r.u64()};
  d.seed = Seed{r.u64()};
  const auto inv = r.u8();
  if (inv > 1) fail(ErrorKind::kDecode, "invert flag must be 0 or 1");
  d.inverted = inv == 1;
  const std::size_t count = r.u32();
  d.deleted_values = unpack_symbols(r.bytes(packed_size(count, k)), count, k);
  if (consumed) *consumed = r.position();
  return d;
}

}  // namespace bonsai

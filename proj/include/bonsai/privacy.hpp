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
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bonsai/alphabet.hpp"

namespace bonsai {

using BigInt = boost::multiprecision::cpp_int;

// Enumeration-based analyses refuse to visit more candidates than this.
inline constexpr std::uint64_t kMaxCandidates = std::uint64_t{1} << 24;

enum class Adversary { kWeak, kStrong };

struct PrivacyReport {
  BigInt m;  // preimage count
  double uncertainty_bits = 0;
  double leakage = 0;
  Adversary adversary = Adversary::kWeak;
  bool prng_broken = false;
};

double log2_big(const BigInt& value);

// Number of length-n_o strings over 2^k symbols that contain a fixed
// length-n_b string as a subsequence:
// sum_{j=0}^{n_o-n_b} C(n_o, j+n_b) * (2^k - 1)^(n_o-n_b-j).
BigInt preimage_count_weak(std::size_t n_o, std::size_t n_b, unsigned k);

// Weak adversary. Broken PRNG: the positions are known, so m = 2^(k*n_del),
// uncertainty k*n_del and leakage n_b/n_o.
PrivacyReport weak_report(std::size_t n_o, std::size_t n_b, unsigned k, bool prng_broken);

// W(F=f | O=o): number of index sets at which o occurs in f as a subsequence.
BigInt count_embeddings(std::span<const Symbol> f, std::span<const Symbol> o);

// What the strong adversary knows about original chunks.
class Prior {
 public:
  static Prior uniform(unsigned k);
  static Prior iid(SymbolDistribution symbols);
  // First-order chain: `initial` for the first symbol, then row `transitions[a]`
  // for the symbol following a.
  static Prior markov(SymbolDistribution initial, std::vector<SymbolDistribution> transitions);

  std::size_t alphabet_size() const { return n_; }
  long double probability(std::span<const Symbol> f) const;
  // H(F) over strings of the given length.
  double entropy_bits(std::size_t length) const;

 private:
  enum class Kind { kUniform, kIid, kMarkov };
  Kind kind_ = Kind::kUniform;
  std::size_t n_ = 0;
  std::vector<long double> initial_;
  std::vector<std::vector<long double>> transitions_;
};

// Candidates are packed k bits per symbol with the first symbol most
// significant, so numeric order equals lexicographic order. Needs k*n_o <= 64.
std::uint64_t pack_candidate(std::span<const Symbol> f, unsigned k);
SymbolString unpack_candidate(std::uint64_t packed, std::size_t n_o, unsigned k);

struct Posterior {
  unsigned k = 0;
  std::size_t n_o = 0;
  std::vector<std::uint64_t> candidates;  // ascending
  std::vector<long double> probabilities;

  double entropy_bits() const;
  // 1-based rank of `truth` when candidates are ordered by descending
  // probability, ties by ascending candidate. 0 if `truth` is not a candidate.
  std::size_t rank_of(std::uint64_t truth) const;

  // Candidates strictly more likely than `truth`, and those exactly as likely
  // (truth included). Both 0 if `truth` is not a candidate.
  struct Standing {
    std::size_t better = 0;
    std::size_t tied = 0;
  };
  Standing standing_of(std::uint64_t truth) const;
};

// P(F=f | O=o) proportional to W(f|o) * P(f). Without known positions every
// length-n_o supersequence of o is a candidate; with them only the fillings
// of those positions are, each with W = 1.
Posterior strong_posterior(std::span<const Symbol> o, const Prior& prior, std::size_t n_o,
                           unsigned k,
                           std::optional<std::span<const std::size_t>> known_positions = {});

PrivacyReport strong_report(std::span<const Symbol> o, const Prior& prior, std::size_t n_o,
                            unsigned k,
                            std::optional<std::span<const std::size_t>> known_positions = {});

struct RankCurve {
  std::vector<std::size_t> g;
  std::vector<double> hit_fraction;  // share of chunks ranked within the top g
  std::vector<std::size_t> ranks;    // per chunk
  std::uint64_t candidates = 0;      // candidate count of the last chunk
};

// Transforms every chunk under a uniform policy, then ranks the true chunk in
// the adversary's posterior, breaking exact probability ties at random. The adversary sees the un-inverted outsource,
// and with a broken PRNG also the deletion positions.
RankCurve rank_experiment(std::span<const Chunk> chunks, const Prior& prior,
                          std::span<const std::size_t> g_grid, const SystemConfig& config,
                          bool prng_broken, std::uint64_t rng_seed);

}  // namespace bonsai

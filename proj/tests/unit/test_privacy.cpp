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

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bonsai/error.hpp"
#include "bonsai/privacy.hpp"
#include "test_support.hpp"

namespace bonsai {
namespace {

bool is_subsequence(const SymbolString& f, const SymbolString& o) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < f.size() && j < o.size(); ++i) {
    if (f[i] == o[j]) ++j;
  }
  return j == o.size();
}

SymbolString nth_string(std::uint64_t index, std::size_t n, unsigned k) {
  SymbolString s(n);
  for (std::size_t i = n; i-- > 0;) {
    s[i] = static_cast<Symbol>(index & ((1u << k) - 1));
    index >>= k;
  }
  return s;
}

// Counts every length-n string over 2^k symbols containing o.
std::uint64_t brute_preimages(const SymbolString& o, std::size_t n, unsigned k) {
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << (k * n)); ++i) {
    if (is_subsequence(nth_string(i, n, k), o)) ++count;
  }
  return count;
}

// Enumerates every index subset of f of size |o|.
std::uint64_t brute_embeddings(const SymbolString& f, const SymbolString& o) {
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.size()); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != o.size()) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < f.size() && ok; ++i) {
      if (mask >> i & 1) ok = f[i] == o[j++];
    }
    if (ok) ++count;
  }
  return count;
}

TEST(Privacy, PreimageExamples) {
  EXPECT_EQ(preimage_count_weak(3, 2, 1), 4);
  EXPECT_EQ(preimage_count_weak(5, 5, 2), 1);
  EXPECT_EQ(preimage_count_weak(4, 2, 2), brute_preimages({1, 3}, 4, 2));
}

TEST(Privacy, PreimageMatchesEnumeration) {
  testing::Gen g(1);
  for (unsigned k : {1u, 2u}) {
    for (std::size_t n_o = 1; n_o <= 8; ++n_o) {
      for (std::size_t n_b = 1; n_b < n_o; ++n_b) {
        const auto o = g.symbols(n_b, k);
        ASSERT_EQ(preimage_count_weak(n_o, n_b, k), brute_preimages(o, n_o, k))
            << "n_o=" << n_o << " n_b=" << n_b << " k=" << k;
      }
    }
  }
}

TEST(Privacy, WeakBrokenLine) {
  const auto r = weak_report(256, 241, 8, true);
  EXPECT_DOUBLE_EQ(r.uncertainty_bits, 120.0);
  EXPECT_DOUBLE_EQ(r.leakage, 241.0 / 256.0);
  EXPECT_EQ(r.m, BigInt(1) << 120);
  const auto full = weak_report(64, 64, 4, false);
  EXPECT_DOUBLE_EQ(full.leakage, 1.0);
  EXPECT_DOUBLE_EQ(full.uncertainty_bits, 0.0);
}

TEST(Privacy, BrokenLeakageIsExactRatio) {
  for (std::size_t n_o : {16u, 100u, 256u}) {
    for (std::size_t n_b = 1; n_b <= n_o; n_b += 7) {
      EXPECT_DOUBLE_EQ(weak_report(n_o, n_b, 8, true).leakage,
                       static_cast<double>(n_b) / static_cast<double>(n_o));
    }
  }
}

TEST(Privacy, UnbrokenNeverWeakerAndMonotone) {
  for (unsigned k : {2u, 4u, 8u}) {
    for (std::size_t n_o : {8u, 64u, 256u}) {
      double prev = -1;
      for (std::size_t n_del = 0; n_del < n_o; ++n_del) {
        const auto safe = weak_report(n_o, n_o - n_del, k, false);
        const auto broken = weak_report(n_o, n_o - n_del, k, true);
        ASSERT_GE(safe.uncertainty_bits + 1e-9, broken.uncertainty_bits);
        ASSERT_GE(safe.uncertainty_bits + 1e-9, prev);
        ASSERT_GE(safe.leakage, -1e-12);
        ASSERT_LE(safe.leakage, 1 + 1e-12);
        prev = safe.uncertainty_bits;
      }
    }
  }
}

TEST(Privacy, EmbeddingExamples) {
  EXPECT_EQ(count_embeddings(SymbolString{1, 1, 1}, SymbolString{1, 1}), 3);
  EXPECT_EQ(count_embeddings(SymbolString{1, 2, 1}, SymbolString{1, 1}), 1);
  EXPECT_EQ(count_embeddings(SymbolString{1, 2, 1, 2}, SymbolString{1, 2}), 3);
  EXPECT_EQ(count_embeddings(SymbolString{1}, SymbolString{1, 1}), 0);
  EXPECT_EQ(count_embeddings(SymbolString{}, SymbolString{}), 1);
}

TEST(Privacy, EmbeddingsMatchEnumeration) {
  testing::Gen g(2);
  for (int trial = 0; trial < 400; ++trial) {
    const auto f = g.symbols(g.range(0, 10), 1 + static_cast<unsigned>(g.below(2)));
    const auto o = g.symbols(g.range(0, f.size()), 1);
    ASSERT_EQ(count_embeddings(f, o), brute_embeddings(f, o));
  }
}

TEST(Privacy, PackingOrdersLexicographically) {
  testing::Gen g(3);
  for (int i = 0; i < 200; ++i) {
    const auto a = g.symbols(8, 4), b = g.symbols(8, 4);
    EXPECT_EQ(unpack_candidate(pack_candidate(a, 4), 8, 4), a);
    EXPECT_EQ(pack_candidate(a, 4) < pack_candidate(b, 4), a < b);
  }
}

TEST(Privacy, WorkedPosterior) {
  const auto post = strong_posterior(SymbolString{0, 0}, Prior::uniform(1), 3, 1);
  ASSERT_EQ(post.candidates, (std::vector<std::uint64_t>{0b000, 0b001, 0b010, 0b100}));
  EXPECT_NEAR(static_cast<double>(post.probabilities[0]), 0.5, 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(static_cast<double>(post.probabilities[i]), 1.0 / 6, 1e-15);
  EXPECT_NEAR(post.entropy_bits(), 0.5 + 0.5 * std::log2(6.0), 1e-12);
  EXPECT_NEAR(post.entropy_bits(), 1.7925, 5e-5);
  EXPECT_EQ(post.rank_of(0b000), 1u);
  EXPECT_EQ(post.rank_of(0b010), 3u);
  EXPECT_EQ(post.rank_of(0b111), 0u);
  EXPECT_EQ(post.standing_of(0b010).better, 1u);
  EXPECT_EQ(post.standing_of(0b010).tied, 3u);
  EXPECT_EQ(post.standing_of(0b111).tied, 0u);
}

TEST(Privacy, BrokenUniformPosteriorIsFlat) {
  const std::vector<std::size_t> holes{4, 1};
  const auto post = strong_posterior(SymbolString{3, 0, 2, 1}, Prior::uniform(2), 6, 2,
                                     std::span<const std::size_t>(holes));
  ASSERT_EQ(post.candidates.size(), 16u);
  EXPECT_NEAR(post.entropy_bits(), 4.0, 1e-12);
  for (auto c : post.candidates) {
    const auto f = unpack_candidate(c, 6, 2);
    EXPECT_EQ((SymbolString{f[0], f[2], f[3], f[5]}), (SymbolString{3, 0, 2, 1}));
  }
  const auto r = strong_report(SymbolString{3, 0, 2, 1}, Prior::uniform(2), 6, 2,
                               std::span<const std::size_t>(holes));
  EXPECT_NEAR(r.uncertainty_bits, weak_report(6, 4, 2, true).uncertainty_bits, 1e-12);
}

TEST(Privacy, PointMassPrior) {
  // An i.i.d. prior on a single symbol leaves one candidate.
  std::vector<std::uint64_t> w{0, 1, 0, 0};
  const auto post = strong_posterior(SymbolString{1, 1}, Prior::iid(SymbolDistribution::from_weights(w)), 4, 2);
  long double mass = 0;
  for (std::size_t i = 0; i < post.candidates.size(); ++i) {
    if (post.probabilities[i] > 0) {
      EXPECT_EQ(unpack_candidate(post.candidates[i], 4, 2), (SymbolString{1, 1, 1, 1}));
      mass += post.probabilities[i];
    }
  }
  EXPECT_NEAR(static_cast<double>(mass), 1.0, 1e-15);
  EXPECT_NEAR(post.entropy_bits(), 0.0, 1e-12);
}

TEST(Privacy, PosteriorNormalisesAndStrongBoundedByWeak) {
  testing::Gen g(4);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned k = 2;
    const std::size_t n_o = g.range(3, 7), n_b = g.range(1, n_o - 1);
    const auto o = g.symbols(n_b, k);
    auto w = g.weights(4, 9);
    for (auto& x : w) ++x;
    const auto prior =
        trial % 2 ? Prior::uniform(k) : Prior::iid(SymbolDistribution::from_weights(w));
    const auto post = strong_posterior(o, prior, n_o, k);
    long double total = 0;
    for (auto p : post.probabilities) total += p;
    ASSERT_NEAR(static_cast<double>(total), 1.0, std::ldexp(1.0, -40));
    ASSERT_LE(post.candidates.size(), static_cast<std::size_t>(preimage_count_weak(n_o, n_b, k)));
    if (trial % 2) {
      ASSERT_EQ(post.candidates.size(), static_cast<std::size_t>(preimage_count_weak(n_o, n_b, k)));
    }
    for (auto c : post.candidates) ASSERT_TRUE(is_subsequence(unpack_candidate(c, n_o, k), o));
    const auto strong = strong_report(o, prior, n_o, k);
    ASSERT_LE(strong.uncertainty_bits, weak_report(n_o, n_b, k, false).uncertainty_bits + 1e-9);
    ASSERT_LE(strong.leakage, 1 + 1e-9);
    // For a single observed outsource H(F|O=o) may exceed H(F) under a skewed
    // prior; only the uniform prior bounds it pointwise.
    if (trial % 2) {
      ASSERT_GE(strong.leakage, -1e-9);
    }
  }
}

TEST(Privacy, MarkovEntropyMatchesEnumeration) {
  testing::Gen g(5);
  std::vector<SymbolDistribution> rows;
  for (int a = 0; a < 4; ++a) rows.push_back(SymbolDistribution::from_weights(g.weights(4, 9)));
  const auto prior = Prior::markov(SymbolDistribution::from_weights(g.weights(4, 9)), rows);
  double h = 0;
  long double total = 0;
  for (std::uint64_t i = 0; i < 256; ++i) {
    const auto p = prior.probability(nth_string(i, 4, 2));
    total += p;
    if (p > 0) h -= static_cast<double>(p) * std::log2(static_cast<double>(p));
  }
  EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-15);
  EXPECT_NEAR(prior.entropy_bits(4), h, 1e-9);
  EXPECT_NEAR(Prior::uniform(4).entropy_bits(10), 40.0, 1e-12);
}

TEST(Privacy, EnumerationCapacityGate) {
  testing::Gen g(6);
  try {
    strong_posterior(g.symbols(30, 8), Prior::uniform(8), 40, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapacity);
  }
}

TEST(Privacy, RankLawUnderBrokenPrng) {
  // Uniform prior with known positions: the true chunk's rank is uniform over
  // the m candidates, so the top-g hit rate is g/m.
  testing::Gen g(7);
  const auto config = SystemConfig::make(2, 6, 4);
  const std::size_t trials = 10000;
  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < trials; ++i) chunks.push_back(g.symbols(6, 2));
  const std::vector<std::size_t> grid{0, 1, 4, 8, 12, 16};
  const auto curve = rank_experiment(chunks, Prior::uniform(2), grid, config, true, 17);
  EXPECT_EQ(curve.candidates, 16u);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double expect = grid[i] / 16.0;
    const double sigma = std::sqrt(expect * (1 - expect) / trials);
    EXPECT_NEAR(curve.hit_fraction[i], expect, 3 * sigma + 1e-12) << "g=" << grid[i];
  }
}

TEST(Privacy, RankCurveEndpoints) {
  testing::Gen g(8);
  const auto config = SystemConfig::make(2, 6, 4);
  std::vector<Chunk> chunks;
  for (int i = 0; i < 200; ++i) chunks.push_back(g.skewed_symbols(6, 2));
  const auto m = static_cast<std::size_t>(preimage_count_weak(6, 4, 2));
  const std::vector<std::size_t> grid{0, 1, 2, 5, 10, 50, m};
  const auto curve = rank_experiment(chunks, Prior::uniform(2), grid, config, false, 3);
  EXPECT_EQ(curve.hit_fraction.front(), 0.0);
  EXPECT_EQ(curve.hit_fraction.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(curve.hit_fraction.begin(), curve.hit_fraction.end()));
  for (auto r : curve.ranks) {
    EXPECT_GE(r, 1u);
    EXPECT_LE(r, m);
  }
}

}  // namespace
}  // namespace bonsai

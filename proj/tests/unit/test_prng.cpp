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
#include <set>

#include "bonsai/error.hpp"
#include "bonsai/prng.hpp"
#include "test_support.hpp"

namespace bonsai {
namespace {

// Straight transcription of the published SplitMix64 reference, kept apart
// from the library so the two can disagree.
std::uint64_t reference_splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> reference_positions(std::uint64_t seed, std::size_t n_o, std::size_t count) {
  std::vector<std::size_t> out;
  std::uint64_t state = seed;
  while (out.size() < count) {
    const std::size_t p = reference_splitmix(state) % n_o;
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

TEST(SplitMix64, KnownVectors) {
  EXPECT_EQ(splitmix64_next(0).output, 0xE220A8397B1DCDAFull);
  EXPECT_EQ(splitmix64_next(1).output, 0x910A2DEC89025CC1ull);
  EXPECT_EQ(splitmix64_next(0).next_state, 0x9E3779B97F4A7C15ull);
  static_assert(splitmix64_next(0).output == 0xE220A8397B1DCDAFull);
}

TEST(SplitMix64, MatchesReferenceStream) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xFFFFFFFFFFFFFFFFull}) {
    SplitMix64 lib(seed);
    std::uint64_t ref = seed;
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(lib(), reference_splitmix(ref));
  }
}

TEST(DeletionPositions, SmallCases) {
  EXPECT_TRUE(deletion_positions(Seed{7}, 11, 0).empty());
  EXPECT_EQ(deletion_positions(Seed{99}, 1, 1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(deletion_positions(Seed{0}, 11, 3), (std::vector<std::size_t>{1, 10, 3}));
  EXPECT_EQ(deletion_positions(Seed{0}, 11, 3), reference_positions(0, 11, 3));
  EXPECT_EQ(deletion_positions(Seed{42}, 256, 15),
            (std::vector<std::size_t>{149, 3, 82, 148, 242, 6, 93, 164, 213, 174, 191, 190, 230,
                                      183, 220}));
}

TEST(DeletionPositions, CountAboveLengthIsRejected) {
  try {
    deletion_positions(Seed{1}, 4, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParameter);
  }
}

TEST(DeletionPositions, DistinctDeterministicAndReferenceExact) {
  testing::Gen g(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t seed = g.u64();
    const std::size_t n_o = 1 + g.below(300);
    const std::size_t count = g.below(n_o + 1);
    const auto p = deletion_positions(Seed{seed}, n_o, count);
    ASSERT_EQ(p, deletion_positions(Seed{seed}, n_o, count));
    ASSERT_EQ(p, reference_positions(seed, n_o, count));
    ASSERT_EQ(std::set<std::size_t>(p.begin(), p.end()).size(), count);
    for (auto x : p) ASSERT_LT(x, n_o);
  }
}

TEST(DeletionPositions, EmpiricalUniformity) {
  constexpr std::size_t kN = 16;
  constexpr int kDraws = 100000;
  std::vector<int> hits(kN, 0);
  testing::Gen g(17);
  for (int i = 0; i < kDraws; ++i) ++hits[deletion_positions(Seed{g.u64()}, kN, 1)[0]];
  const double expected = static_cast<double>(kDraws) / kN;
  for (int h : hits) EXPECT_NEAR(h, expected, 0.05 * expected);
}

}  // namespace
}  // namespace bonsai

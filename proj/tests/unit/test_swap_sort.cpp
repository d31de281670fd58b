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
#include <map>

#include "bonsai/error.hpp"
#include "bonsai/swap_sort.hpp"
#include "test_support.hpp"

namespace bonsai {
namespace {

std::vector<std::uint8_t> insertion_sort(std::vector<std::uint8_t> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) std::swap(v[j - 1], v[j]);
  }
  return v;
}

std::vector<std::uint8_t> random_bids(testing::Gen& g, std::size_t n, unsigned values) {
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = static_cast<std::uint8_t>(g.below(values));
  return v;
}

TEST(SortBids, Examples) {
  EXPECT_EQ(sort_bids(std::vector<std::uint8_t>{1, 0, 0, 1}), (BaseString{0, 0, 1, 1}));
  EXPECT_EQ(sort_bids(std::vector<std::uint8_t>{0, 1, 2}), (BaseString{0, 1, 2}));
  std::vector<std::uint8_t> rev(100);
  for (std::size_t i = 0; i < 100; ++i) rev[i] = static_cast<std::uint8_t>(99 - i);
  EXPECT_EQ(sort_bids(rev), insertion_sort(rev));
}

TEST(SortBids, MatchesInsertionSortOracle) {
  testing::Gen g(1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = random_bids(g, g.below(300), 1 + static_cast<unsigned>(g.below(16)));
    EXPECT_EQ(sort_bids(v), insertion_sort(v));
  }
}

TEST(FindSwaps, Examples) {
  const std::vector<std::uint8_t> worked{1, 0, 0, 0, 0, 0, 1, 1};
  EXPECT_EQ(find_swaps(worked, sort_bids(worked)), (std::vector<Swap>{{0, 5}}));
  const std::vector<std::uint8_t> sorted{0, 0, 1, 2};
  EXPECT_TRUE(find_swaps(sorted, sorted).empty());
  const std::vector<std::uint8_t> rev{2, 1, 0};
  EXPECT_EQ(find_swaps(rev, sort_bids(rev)), (std::vector<Swap>{{0, 2}}));
}

TEST(FindSwaps, NotAPermutationIsInternalError) {
  const std::vector<std::uint8_t> a{1, 0}, b{0, 0};
  try {
    find_swaps(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInternal);
  }
}

TEST(FindSwaps, PropertiesOnRandomStrings) {
  testing::Gen g(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = g.range(1, 300);
    const auto bids = random_bids(g, n, 1 + static_cast<unsigned>(g.below(8)));
    const auto base = sort_bids(bids);
    const auto swaps = find_swaps(bids, base);
    ASSERT_LE(swaps.size(), n - 1);
    auto work = bids;
    std::size_t last_left = 0;
    for (std::size_t i = 0; i < swaps.size(); ++i) {
      ASSERT_LT(swaps[i].left, swaps[i].right);
      if (i > 0) {
        ASSERT_GT(swaps[i].left, last_left);
      }
      last_left = swaps[i].left;
      std::swap(work[swaps[i].left], work[swaps[i].right]);
    }
    ASSERT_EQ(work, base);
  }
}

TEST(EncodeChange, Examples) {
  const std::vector<Swap> one{{0, 5}};
  const auto c = encode_change(one, 8);
  EXPECT_EQ(c.bitmap.to_text(), "10000000");
  EXPECT_EQ(c.positions, (std::vector<std::uint32_t>{5}));

  const auto none = encode_change({}, 8);
  EXPECT_EQ(none.bitmap.to_text(), "00000000");
  EXPECT_TRUE(none.positions.empty());

  const std::vector<Swap> two{{0, 2}, {1, 3}};
  const auto c2 = encode_change(two, 4);
  EXPECT_EQ(c2.bitmap.to_text(), "1100");
  EXPECT_EQ(c2.positions, (std::vector<std::uint32_t>{2, 3}));

  const std::vector<Swap> shared{{1, 2}, {1, 3}};
  EXPECT_THROW(encode_change(shared, 4), Error);
  const std::vector<Swap> backwards{{2, 1}};
  EXPECT_THROW(encode_change(backwards, 4), Error);
}

TEST(ApplyChangeInverse, WorkedAndEmpty) {
  const BaseString base{0, 0, 0, 0, 0, 1, 1, 1};
  const std::vector<Swap> one{{0, 5}};
  EXPECT_EQ(apply_change_inverse(base, encode_change(one, 8)), (BidString{1, 0, 0, 0, 0, 0, 1, 1}));
  EXPECT_EQ(apply_change_inverse(base, encode_change({}, 8)), base);
}

TEST(ApplyChangeInverse, RejectsMalformedChange) {
  const BaseString base{0, 0, 1, 1};
  Change c = encode_change(std::vector<Swap>{{0, 2}}, 4);
  c.positions.push_back(3);
  EXPECT_THROW(apply_change_inverse(base, c), Error);
  Change out_of_range = encode_change(std::vector<Swap>{{0, 2}}, 4);
  out_of_range.positions[0] = 9;
  EXPECT_THROW(apply_change_inverse(base, out_of_range), Error);
}

TEST(Change, RoundTripProperty) {
  testing::Gen g(3);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = g.range(1, 260);
    const auto bids = random_bids(g, n, 1 + static_cast<unsigned>(g.below(8)));
    const auto base = sort_bids(bids);
    const auto change = encode_change(find_swaps(bids, base), n);
    ASSERT_EQ(change.positions.size(), change.bitmap.popcount());
    ASSERT_EQ(apply_change_inverse(base, change), bids);
    const auto bytes = serialize_change(change, n);
    ASSERT_EQ(deserialize_change(bytes, n), change);
  }
}

TEST(Change, WireLayout) {
  const auto c = encode_change(std::vector<Swap>{{0, 5}}, 8);
  EXPECT_EQ(serialize_change(c, 8), (std::vector<std::uint8_t>{0x80, 0x01, 0x00, 0xA0}));
  EXPECT_EQ(change_payload_bits(c, 8), 8u + 3u);
  EXPECT_THROW(deserialize_change(std::vector<std::uint8_t>{0x80, 0x01, 0x00}, 8), Error);
  EXPECT_THROW(deserialize_change(std::vector<std::uint8_t>{0x80, 0x02, 0x00, 0xA0}, 8), Error);
}

TEST(Base, EqualIffHistogramsEqual) {
  testing::Gen g(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = g.range(1, 12);
    const auto a = random_bids(g, n, 3);
    const auto b = random_bids(g, n, 3);
    std::map<int, int> ha, hb;
    for (auto x : a) ++ha[x];
    for (auto x : b) ++hb[x];
    EXPECT_EQ(sort_bids(a) == sort_bids(b), ha == hb);
  }
}

}  // namespace
}  // namespace bonsai

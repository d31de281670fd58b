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

#include <cmath>

#include "bonsai/error.hpp"
#include "bonsai/huffman.hpp"
#include "test_support.hpp"

namespace bonsai {
namespace {

bool is_prefix(const Codeword& a, const Codeword& b) {
  if (a.length > b.length) return false;
  return (b.bits >> (b.length - a.length)) == a.bits;
}

void expect_valid_code(const std::vector<Codeword>& codes) {
  long double kraft = 0;
  for (const auto& c : codes) kraft += std::ldexp(1.0L, -static_cast<int>(c.length));
  // A lone symbol still costs one bit.
  EXPECT_EQ(kraft, codes.size() == 1 ? 0.5L : 1.0L);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = 0; j < codes.size(); ++j) {
      if (i != j) {
        EXPECT_FALSE(is_prefix(codes[i], codes[j])) << i << " prefixes " << j;
      }
    }
  }
}

std::vector<unsigned> lengths_of(const std::vector<Codeword>& codes) {
  std::vector<unsigned> out;
  for (const auto& c : codes) out.push_back(c.length);
  return out;
}

TEST(Huffman, WorkedRowCode) {
  const std::vector<double> rows{7.0 / 16, 7.0 / 32, 34.0 / 192, 1.0 / 6};
  const auto codes = huffman(rows);
  EXPECT_EQ(lengths_of(codes), (std::vector<unsigned>{1, 2, 3, 3}));
  EXPECT_EQ(codes[0].to_string(), "0");
  EXPECT_EQ(codes[1].to_string(), "10");
  EXPECT_EQ(codes[2].to_string(), "110");
  EXPECT_EQ(codes[3].to_string(), "111");
}

TEST(Huffman, DegenerateAndUniform) {
  const auto single = huffman(std::vector<double>{1.0});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].to_string(), "0");
  EXPECT_EQ(lengths_of(huffman(std::vector<double>{0.25, 0.25, 0.25, 0.25})),
            (std::vector<unsigned>{2, 2, 2, 2}));
}

TEST(Huffman, Errors) {
  EXPECT_THROW(huffman(std::vector<double>{}), Error);
  EXPECT_THROW(huffman(std::vector<double>{0, 0}), Error);
  EXPECT_THROW(huffman(std::vector<double>{0.5, -0.1}), Error);
}

TEST(Huffman, ZeroWeightsStillGetCodes) {
  const auto codes = huffman(std::vector<std::uint64_t>{5, 0, 0, 3});
  ASSERT_EQ(codes.size(), 4u);
  expect_valid_code(codes);
}

TEST(Huffman, CanonicalByLengthThenIndex) {
  const std::vector<unsigned> lens{3, 1, 3, 2};
  const auto codes = canonical_codes(lens);
  EXPECT_EQ(codes[1].to_string(), "0");
  EXPECT_EQ(codes[3].to_string(), "10");
  EXPECT_EQ(codes[0].to_string(), "110");
  EXPECT_EQ(codes[2].to_string(), "111");
}

TEST(Huffman, RandomDistributionsAreValidAndNearEntropy) {
  testing::Gen g(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto w = g.weights(1 + g.below(64), 1000);
    const auto codes = huffman(std::span<const std::uint64_t>(w));
    expect_valid_code(codes);
    double total = 0, h = 0, avg = 0;
    for (auto x : w) total += static_cast<double>(x);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double p = static_cast<double>(w[i]) / total;
      if (p > 0) h -= p * std::log2(p);
      avg += p * codes[i].length;
    }
    if (w.size() > 1) {
      EXPECT_LT(avg, h + 1.0);
    }
    EXPECT_GE(avg + 1e-12, h);
  }
}

TEST(Huffman, DeterministicForEqualInputs) {
  testing::Gen g(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = g.weights(32, 4);  // many ties
    EXPECT_EQ(huffman(std::span<const std::uint64_t>(w)), huffman(std::span<const std::uint64_t>(w)));
  }
}

TEST(CanonicalDecoder, DecodesEveryCodeword) {
  testing::Gen g(10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = g.weights(2 + g.below(40), 100);
    const auto codes = huffman(std::span<const std::uint64_t>(w));
    const CanonicalDecoder dec(codes);
    BitString stream;
    std::vector<std::size_t> sent;
    for (int i = 0; i < 200; ++i) {
      const std::size_t idx = g.below(codes.size());
      sent.push_back(idx);
      stream.append(codes[idx]);
    }
    BitReader r(stream);
    for (std::size_t idx : sent) ASSERT_EQ(dec.decode(r), idx);
    EXPECT_TRUE(r.done());
  }
}

TEST(CanonicalDecoder, TruncatedInputThrows) {
  const auto codes = huffman(std::vector<double>{0.5, 0.25, 0.25});
  const CanonicalDecoder dec(codes);
  const BitString one_bit = BitString::from_text("1");
  BitReader r(one_bit);
  EXPECT_THROW(dec.decode(r), Error);
}

}  // namespace
}  // namespace bonsai

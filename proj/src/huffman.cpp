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

#include "bonsai/huffman.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

#include "bonsai/error.hpp"

namespace bonsai {
namespace {

template <typename W>
std::vector<unsigned> lengths_impl(std::span<const W> weights) {
  const std::size_t n = weights.size();
  if (n == 0) fail(ErrorKind::kParameter, "huffman code over zero items");
  bool any_positive = false;
  for (const W& w : weights) {
    if (!(w >= W{0})) fail(ErrorKind::kParameter, "huffman weights must be nonnegative");
    any_positive = any_positive || w > W{0};
  }
  if (!any_positive) fail(ErrorKind::kParameter, "huffman weights are all zero");
  if (n == 1) return {1};

  // Heap entries: (weight, order, node). Leaves take order = index and merged
  // nodes take order = n + creation count.
  using Item = std::tuple<W, std::size_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<std::size_t> parent(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) heap.emplace(weights[i], i, i);
  std::size_t next = n;
  while (heap.size() > 1) {
    const auto [wa, oa, a] = heap.top();
    heap.pop();
    const auto [wb, ob, b] = heap.top();
    heap.pop();
    parent[a] = next;
    parent[b] = next;
    heap.emplace(wa + wb, next, next);
    ++next;
  }
  const std::size_t root = next - 1;
  std::vector<unsigned> depth(2 * n - 1, 0);
  for (std::size_t node = root; node-- > 0;) depth[node] = depth[parent[node]] + 1;
  std::vector<unsigned> out(depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(n));
  if (*std::max_element(out.begin(), out.end()) > 64) {
    fail(ErrorKind::kCapacity, "huffman codeword longer than 64 bits");
  }
  return out;
}

}  // namespace

std::vector<unsigned> huffman_lengths(std::span<const std::uint64_t> weights) {
  return lengths_impl(weights);
}

std::vector<unsigned> huffman_lengths(std::span<const double> weights) {
  return lengths_impl(weights);
}

std::vector<Codeword> canonical_codes(std::span<const unsigned> lengths) {
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
  std::vector<Codeword> codes(lengths.size());
  std::uint64_t code = 0;
  unsigned prev = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const unsigned len = lengths[order[i]];
    if (len == 0 || len > 64) fail(ErrorKind::kParameter, "codeword length out of range");
    if (i > 0) ++code;
    code <<= (len - prev);
    prev = len;
    codes[order[i]] = Codeword{code, len};
  }
  return codes;
}

std::vector<Codeword> huffman(std::span<const double> weights) {
  const auto lengths = huffman_lengths(weights);
  return canonical_codes(lengths);
}

std::vector<Codeword> huffman(std::span<const std::uint64_t> weights) {
  const auto lengths = huffman_lengths(weights);
  return canonical_codes(lengths);
}

CanonicalDecoder::CanonicalDecoder(std::span<const Codeword> codes) {
  entries_.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    entries_.push_back({codes[i].bits, codes[i].length, i});
    max_length_ = std::max(max_length_, codes[i].length);
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.length, a.bits) < std::tie(b.length, b.bits);
  });
}

std::size_t CanonicalDecoder::decode(BitReader& reader) const {
  std::uint64_t code = 0;
  std::size_t e = 0;
  for (unsigned len = 1; len <= max_length_; ++len) {
    code = (code << 1) | (reader.read_bit() ? 1u : 0u);
    while (e < entries_.size() && entries_[e].length < len) ++e;
    for (std::size_t i = e; i < entries_.size() && entries_[i].length == len; ++i) {
      if (entries_[i].bits == code) return entries_[i].index;
    }
  }
  fail(ErrorKind::kDecode, "bits do not form a codeword");
}

}  // namespace bonsai

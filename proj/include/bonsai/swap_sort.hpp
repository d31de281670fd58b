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
#include <span>
#include <utility>
#include <vector>

#include "bonsai/bits.hpp"

namespace bonsai {

using BidString = std::vector<std::uint8_t>;
// The ascending Bid string that the cloud deduplicates.
using BaseString = std::vector<std::uint8_t>;

struct Swap {
  std::size_t left;
  std::size_t right;
  bool operator==(const Swap&) const = default;
};

// C: bit i of `bitmap` is set iff a swap has left endpoint i; `positions`
// holds the right endpoints in swap order.
struct Change {
  BitString bitmap;
  std::vector<std::uint32_t> positions;

  bool operator==(const Change&) const = default;
};

// Stable ascending merge sort of the Bid string.
BaseString sort_bids(std::span<const std::uint8_t> bids);

// Swaps that turn `bids` into `base`, scanning left to right. At each
// mismatched position j the swap partner is the smallest k > j that holds the
// value base[j] and is itself out of place, so every position before j is
// final once the scan passes it.
std::vector<Swap> find_swaps(std::span<const std::uint8_t> bids, std::span<const std::uint8_t> base);

Change encode_change(std::span<const Swap> swaps, std::size_t n_b);
std::vector<Swap> decode_swaps(const Change& change, std::size_t n_b);

// Replays the recorded swaps on the base in reverse order, recovering the
// original Bid string.
BidString apply_change_inverse(std::span<const std::uint8_t> base, const Change& change);

// Exact payload size: n_b bitmap bits plus ceil(log2 n_b) bits per swap.
std::size_t change_payload_bits(const Change& change, std::size_t n_b);

// Wire layout: bitmap bytes (MSB first, zero padded), u16 LE swap count, then
// right endpoints at ceil(log2 n_b) bits each, zero padded.
std::vector<std::uint8_t> serialize_change(const Change& change, std::size_t n_b);
Change deserialize_change(std::span<const std::uint8_t> bytes, std::size_t n_b);

}  // namespace bonsai

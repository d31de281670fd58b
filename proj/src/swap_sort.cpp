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

#include "bonsai/swap_sort.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

#include "bonsai/byte_io.hpp"
#include "bonsai/error.hpp"
#include "bonsai/instrument.hpp"

namespace bonsai {

BaseString sort_bids(std::span<const std::uint8_t> bids) {
  BaseString base(bids.begin(), bids.end());
  std::uint64_t comparisons = 0;
  std::stable_sort(base.begin(), base.end(), [&comparisons](std::uint8_t a, std::uint8_t b) {
    ++comparisons;
    return a < b;
  });
  instrument::tick(comparisons + bids.size());
  return base;
}

std::vector<Swap> find_swaps(std::span<const std::uint8_t> bids,
                             std::span<const std::uint8_t> base) {
  const std::size_t n = bids.size();
  if (base.size() != n) fail(ErrorKind::kInternal, "base and bid string differ in length");
  std::size_t alphabet = 0;
  for (std::size_t i = 0; i < n; ++i) {
    alphabet = std::max<std::size_t>({alphabet, std::size_t{bids[i]} + 1, std::size_t{base[i]} + 1});
  }
  {
    std::vector<std::size_t> hist(alphabet, 0);
    for (auto b : bids) ++hist[b];
    for (auto b : base) {
      if (hist[b]-- == 0) fail(ErrorKind::kInternal, "base is not a permutation of the bids");
    }
  }

  BidString work(bids.begin(), bids.end());
  // For each value v, candidate positions k with work[k] == v != base[k],
  // smallest first. Entries go stale when a swap changes work[k]; they are
  // revalidated on pop.
  using MinHeap = std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>>;
  std::vector<MinHeap> holders(alphabet);
  for (std::size_t k = 0; k < n; ++k) {
    if (work[k] != base[k]) holders[work[k]].push(k);
  }

  std::vector<Swap> swaps;
  std::uint64_t steps = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (work[j] == base[j]) continue;
    const std::uint8_t want = base[j];
    auto& heap = holders[want];
    std::size_t k = n;
    while (!heap.empty()) {
      const std::size_t cand = heap.top();
      heap.pop();
      ++steps;
      if (cand > j && work[cand] == want && base[cand] != want) {
        k = cand;
        break;
      }
    }
    if (k == n) fail(ErrorKind::kInternal, "no swap partner; base is not the sorted bids");
    const std::uint8_t displaced = work[j];
    std::swap(work[j], work[k]);
    if (displaced != base[k]) holders[displaced].push(k);
    swaps.push_back({j, k});
  }
  instrument::tick(steps);
  return swaps;
}

Change encode_change(std::span<const Swap> swaps, std::size_t n_b) {
  Change c;
  c.bitmap = BitString::from_bytes(std::vector<std::uint8_t>((n_b + 7) / 8, 0), n_b);
  c.positions.reserve(swaps.size());
  std::size_t prev_left = 0;
  for (std::size_t i = 0; i < swaps.size(); ++i) {
    const Swap& s = swaps[i];
    if (s.right >= n_b || s.left >= s.right) {
      fail(ErrorKind::kParameter, "swap (" + std::to_string(s.left) + "," +
                                      std::to_string(s.right) + ") is not an ordered pair in [0," +
                                      std::to_string(n_b) + ")");
    }
    if (i > 0 && s.left <= prev_left) {
      fail(ErrorKind::kParameter, "swap left endpoints must be strictly increasing");
    }
    prev_left = s.left;
    c.bitmap.set_bit(s.left, true);
    c.positions.push_back(static_cast<std::uint32_t>(s.right));
  }
  return c;
}

std::vector<Swap> decode_swaps(const Change& change, std::size_t n_b) {
  if (change.bitmap.size() != n_b) {
    fail(ErrorKind::kDecode, "change bitmap has " + std::to_string(change.bitmap.size()) +
                                 " bits, expected " + std::to_string(n_b));
  }
  if (change.positions.size() != change.bitmap.popcount()) {
    fail(ErrorKind::kDecode, "change lists " + std::to_string(change.positions.size()) +
                                 " positions for " + std::to_string(change.bitmap.popcount()) +
                                 " marked swaps");
  }
  std::vector<Swap> swaps;
  swaps.reserve(change.positions.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < n_b; ++i) {
    if (!change.bitmap.bit(i)) continue;
    const std::size_t right = change.positions[next++];
    if (right <= i || right >= n_b) {
      fail(ErrorKind::kDecode, "swap partner " + std::to_string(right) + " invalid for " +
                                   std::to_string(i));
    }
    swaps.push_back({i, right});
  }
  return swaps;
}

BidString apply_change_inverse(std::span<const std::uint8_t> base, const Change& change) {
  const auto swaps = decode_swaps(change, base.size());
  BidString out(base.begin(), base.end());
  for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) std::swap(out[it->left], out[it->right]);
  instrument::tick(base.size() + swaps.size());
  return out;
}

std::size_t change_payload_bits(const Change& change, std::size_t n_b) {
  return n_b + change.positions.size() * ceil_log2(n_b);
}

std::vector<std::uint8_t> serialize_change(const Change& change, std::size_t n_b) {
  if (change.bitmap.size() != n_b) fail(ErrorKind::kParameter, "bitmap length differs from n_b");
  if (change.positions.size() > 0xFFFF) fail(ErrorKind::kCapacity, "too many swaps for u16 count");
  ByteWriter w;
  w.bytes(change.bitmap.bytes());
  w.u16(static_cast<std::uint16_t>(change.positions.size()));
  BitString packed;
  const unsigned width = ceil_log2(n_b);
  for (auto p : change.positions) packed.append_bits(p, width);
  w.bytes(packed.bytes());
  return w.take();
}

Change deserialize_change(std::span<const std::uint8_t> bytes, std::size_t n_b) {
  ByteReader r(bytes);
  const auto bitmap_bytes = r.bytes((n_b + 7) / 8);
  Change c;
  c.bitmap = BitString::from_bytes({bitmap_bytes.begin(), bitmap_bytes.end()}, n_b);
  const std::size_t count = r.u16();
  const unsigned width = ceil_log2(n_b);
  const std::size_t packed_bits = count * width;
  const auto packed_bytes = r.bytes((packed_bits + 7) / 8);
  if (!r.done()) fail(ErrorKind::kDecode, "trailing bytes after change record");
  const auto packed = BitString::from_bytes({packed_bytes.begin(), packed_bytes.end()}, packed_bits);
  BitReader br(packed);
  c.positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    c.positions.push_back(static_cast<std::uint32_t>(br.read_bits(width)));
  }
  decode_swaps(c, n_b);
  return c;
}

}  // namespace bonsai

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

#include "bonsai/bits.hpp"

namespace bonsai {

// Canonical Huffman code over the given weights.
//
// Construction repeatedly merges the two lightest nodes. Ties go to the lower
// index, with leaves ordered by position and merged nodes ordered after every
// leaf of equal weight (in creation order). Codewords are then reassigned
// canonically by (length, index), so the code is a pure function of the
// weights and both sides of a link can rebuild it from a shared distribution.
//
// A single item gets the one-bit code "0". Zero weights are allowed as long
// as one weight is positive; those items still receive codewords.
std::vector<Codeword> huffman(std::span<const double> weights);
std::vector<Codeword> huffman(std::span<const std::uint64_t> weights);

// Codeword lengths of `huffman(weights)` before canonical reassignment.
std::vector<unsigned> huffman_lengths(std::span<const std::uint64_t> weights);
std::vector<unsigned> huffman_lengths(std::span<const double> weights);

// Canonical codewords for a list of lengths.
std::vector<Codeword> canonical_codes(std::span<const unsigned> lengths);

// Prefix decoder for a canonical code.
class CanonicalDecoder {
 public:
  CanonicalDecoder() = default;
  explicit CanonicalDecoder(std::span<const Codeword> codes);

  // Reads one codeword and returns its index, or throws a decode error.
  std::size_t decode(BitReader& reader) const;

 private:
  struct Entry {
    std::uint64_t bits;
    unsigned length;
    std::size_t index;
  };
  std::vector<Entry> entries_;  // sorted by (length, bits)
  unsigned max_length_ = 0;
};

}  // namespace bonsai

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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bonsai/alphabet.hpp"
#include "bonsai/bits.hpp"
#include "bonsai/huffman.hpp"

namespace bonsai {

// Where a symbol lives in the bracket table. `zone` is the value id (Vid)
// index, `row` the symbol id (Sid) row and `col` the bracket id (Bid).
struct BracketCell {
  std::uint8_t zone = 0;
  std::uint8_t row = 0;
  std::uint8_t col = 0;

  bool operator==(const BracketCell&) const = default;
};

// The zoned bracket table built from a symbol distribution.
//
// Symbols are ranked by descending probability (ties by ascending value) and
// laid out rows-first: with zones enabled, into zone 0 (top left), then
// zone 1 (top right), zone 2 (bottom left) and zone 3 (bottom right), each
// 2^(k/2-1) x 2^(k/2-1); without zones, into a single 2^(k/2) x 2^(k/2) grid.
// Row ids are Huffman coded over row probabilities summed across zones; zone
// ids are Huffman coded over zone probabilities.
class BracketTable {
 public:
  static BracketTable build(const SymbolDistribution& dist, const SystemConfig& config);

  unsigned k() const { return k_; }
  bool zones_enabled() const { return zone_count_ > 1; }
  std::size_t zone_count() const { return zone_count_; }
  std::size_t rows() const { return side_; }
  std::size_t cols() const { return side_; }
  // Bits needed for one Bid.
  unsigned bid_bits() const { return ceil_log2(side_); }

  BracketCell cell(Symbol s) const { return cells_[s]; }
  Symbol symbol_at(std::size_t zone, std::size_t row, std::size_t col) const {
    return grid_[(zone * side_ + row) * side_ + col];
  }

  const std::vector<Codeword>& sid_codes() const { return sid_codes_; }
  const std::vector<Codeword>& vid_codes() const { return vid_codes_; }
  const CanonicalDecoder& sid_decoder() const { return sid_decoder_; }
  const CanonicalDecoder& vid_decoder() const { return vid_decoder_; }

  // Row and zone weights over the distribution's total.
  const std::vector<std::uint64_t>& row_weights() const { return row_weights_; }
  const std::vector<std::uint64_t>& zone_weights() const { return zone_weights_; }
  std::uint64_t total_weight() const { return total_; }

  // Expected Sid and Vid bits per symbol under the building distribution.
  double expected_sid_bits() const;
  double expected_vid_bits() const;

 private:
  unsigned k_ = 0;
  std::size_t zone_count_ = 1;
  std::size_t side_ = 0;
  std::vector<BracketCell> cells_;  // indexed by symbol
  std::vector<Symbol> grid_;        // [zone][row][col]
  std::vector<std::uint64_t> row_weights_;
  std::vector<std::uint64_t> zone_weights_;
  std::uint64_t total_ = 0;
  std::vector<Codeword> sid_codes_;
  std::vector<Codeword> vid_codes_;
  CanonicalDecoder sid_decoder_;
  CanonicalDecoder vid_decoder_;
};

struct ChangeValuesResult {
  SymbolString chnv;          // every symbol moved to its zone-0 counterpart
  BitString changed_values;   // Vid codeword per symbol, in order
};

struct SplitResult {
  std::vector<std::uint8_t> bids;  // column of each symbol
  BitString addendum;              // Sid codeword per symbol, in order
};

// Value change: symbol at (zone z, row i, col j) becomes the symbol at (0, i, j).
ChangeValuesResult change_values(std::span<const Symbol> outsource, const BracketTable& table);

// Separates each symbol into its Bid and Sid. With zones enabled every symbol
// must already lie in zone 0.
SplitResult split(std::span<const Symbol> symbols, const BracketTable& table);

// Inverse of split (and of change_values when zones are enabled). Every bit
// of both bit strings must be consumed by exactly |bids| codewords.
Outsource merge(std::span<const std::uint8_t> bids, const BitString& addendum,
                const BitString& changed_values, const BracketTable& table);

}  // namespace bonsai

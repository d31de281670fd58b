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

#include "bonsai/bracket_codec.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bonsai/error.hpp"
#include "bonsai/instrument.hpp"

namespace bonsai {
namespace {

double expected_bits(const std::vector<std::uint64_t>& weights,
                     const std::vector<Codeword>& codes, std::uint64_t total) {
  double bits = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    bits += static_cast<double>(weights[i]) * codes[i].length;
  }
  return bits / static_cast<double>(total);
}

}  // namespace

BracketTable BracketTable::build(const SymbolDistribution& dist, const SystemConfig& config) {
  config.validate();
  const std::size_t n = config.alphabet_size();
  if (dist.size() != n) {
    fail(ErrorKind::kParameter, "distribution covers " + std::to_string(dist.size()) +
                                    " symbols, alphabet has " + std::to_string(n));
  }
  if (dist.total() == 0) fail(ErrorKind::kParameter, "distribution is not normalised");

  BracketTable t;
  t.k_ = config.k;
  t.zone_count_ = config.zones_enabled ? 4 : 1;
  t.side_ = std::size_t{1} << (config.zones_enabled ? config.k / 2 - 1 : config.k / 2);
  t.total_ = dist.total();

  std::vector<Symbol> ranked(n);
  std::iota(ranked.begin(), ranked.end(), Symbol{0});
  std::stable_sort(ranked.begin(), ranked.end(), [&](Symbol a, Symbol b) {
    return dist.weight(a) > dist.weight(b);
  });

  const std::size_t per_zone = t.side_ * t.side_;
  t.cells_.resize(n);
  t.grid_.resize(n);
  t.row_weights_.assign(t.side_, 0);
  t.zone_weights_.assign(t.zone_count_, 0);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const Symbol s = ranked[rank];
    const auto zone = static_cast<std::uint8_t>(rank / per_zone);
    const auto row = static_cast<std::uint8_t>((rank % per_zone) / t.side_);
    const auto col = static_cast<std::uint8_t>(rank % t.side_);
    t.cells_[s] = BracketCell{zone, row, col};
    t.grid_[rank] = s;
    t.row_weights_[row] += dist.weight(s);
    t.zone_weights_[zone] += dist.weight(s);
  }

  t.sid_codes_ = huffman(std::span<const std::uint64_t>(t.row_weights_));
  t.sid_decoder_ = CanonicalDecoder(t.sid_codes_);
  if (t.zone_count_ > 1) {
    t.vid_codes_ = huffman(std::span<const std::uint64_t>(t.zone_weights_));
    t.vid_decoder_ = CanonicalDecoder(t.vid_codes_);
  }
  return t;
}

double BracketTable::expected_sid_bits() const {
  return expected_bits(row_weights_, sid_codes_, total_);
}

double BracketTable::expected_vid_bits() const {
  if (!zones_enabled()) return 0;
  return expected_bits(zone_weights_, vid_codes_, total_);
}

ChangeValuesResult change_values(std::span<const Symbol> outsource, const BracketTable& table) {
  const std::size_t n = std::size_t{1} << table.k();
  ChangeValuesResult r;
  r.chnv.reserve(outsource.size());
  for (Symbol s : outsource) {
    if (s >= n) fail(ErrorKind::kRange, "symbol " + std::to_string(s) + " outside the alphabet");
    const BracketCell c = table.cell(s);
    r.chnv.push_back(table.symbol_at(0, c.row, c.col));
    if (table.zones_enabled()) r.changed_values.append(table.vid_codes()[c.zone]);
  }
  instrument::tick(outsource.size());
  return r;
}

SplitResult split(std::span<const Symbol> symbols, const BracketTable& table) {
  const std::size_t n = std::size_t{1} << table.k();
  SplitResult r;
  r.bids.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (s >= n) fail(ErrorKind::kRange, "symbol " + std::to_string(s) + " outside the alphabet");
    const BracketCell c = table.cell(s);
    if (c.zone != 0) {
      fail(ErrorKind::kInternal, "symbol " + std::to_string(s) +
                                     " lies outside zone 0; apply change_values first");
    }
    r.bids.push_back(c.col);
    r.addendum.append(table.sid_codes()[c.row]);
  }
  instrument::tick(symbols.size());
  return r;
}

Outsource merge(std::span<const std::uint8_t> bids, const BitString& addendum,
                const BitString& changed_values, const BracketTable& table) {
  BitReader sid_reader(addendum);
  BitReader vid_reader(changed_values);
  Outsource out;
  out.reserve(bids.size());
  for (std::uint8_t bid : bids) {
    if (bid >= table.cols()) {
      fail(ErrorKind::kDecode, "bid " + std::to_string(bid) + " outside the table");
    }
    const std::size_t row = table.sid_decoder().decode(sid_reader);
    std::size_t zone = 0;
    if (table.zones_enabled()) zone = table.vid_decoder().decode(vid_reader);
    out.push_back(table.symbol_at(zone, row, bid));
  }
  if (!sid_reader.done()) fail(ErrorKind::kDecode, "trailing bits in the addendum");
  if (!vid_reader.done()) fail(ErrorKind::kDecode, "trailing bits in the changed values");
  instrument::tick(bids.size());
  return out;
}

}  // namespace bonsai

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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bonsai {

// A k-bit symbol. Supported widths are even k in [2, 8], so one byte holds
// any symbol.
using Symbol = std::uint8_t;
using SymbolString = std::vector<Symbol>;

// An original chunk of exactly n_o symbols.
using Chunk = SymbolString;
// The n_b symbols a client actually uploads.
using Outsource = SymbolString;

struct FileId {
  std::uint64_t value = 0;
  auto operator<=>(const FileId&) const = default;
};

struct BasePointer {
  std::uint64_t value = 0;
  auto operator<=>(const BasePointer&) const = default;
};

struct Seed {
  std::uint64_t value = 0;
  auto operator<=>(const Seed&) const = default;
};

struct SystemConfig {
  unsigned k = 8;                 // bits per symbol
  std::size_t n_o = 256;          // symbols per original chunk
  std::size_t n_b = 241;          // symbols per outsource
  std::size_t t = 4;              // candidate seeds per chunk
  unsigned seed_bits = 64;
  unsigned fid_bits = 64;
  unsigned pointer_bits = 64;
  bool zones_enabled = true;

  // Config with zones on iff k >= 4 and 64-bit seeds, ids and pointers.
  static SystemConfig make(unsigned k, std::size_t n_o, std::size_t n_b,
                           std::size_t t = 4);

  std::size_t alphabet_size() const { return std::size_t{1} << k; }
  std::size_t n_del() const { return n_o - n_b; }
  Symbol max_symbol() const { return static_cast<Symbol>(alphabet_size() - 1); }

  // Throws a parameter error unless k is even in [2, 8], 1 <= n_b <= n_o and
  // t >= 1.
  void validate() const;

  bool operator==(const SystemConfig&) const = default;
};

// A symbol distribution held as nonnegative integer weights over a common
// total: probability(i) = weight(i) / total(). Histograms, smoothed policies
// and quantised real-valued distributions all map onto this exactly, which
// keeps table construction and candidate selection free of rounding ties.
class SymbolDistribution {
 public:
  SymbolDistribution() = default;

  static SymbolDistribution from_weights(std::vector<std::uint64_t> weights);
  // Quantises to 2^40 fixed point. Inputs must be nonnegative and sum to 1
  // within 2^-20.
  static SymbolDistribution from_probabilities(std::span<const double> probs);
  static SymbolDistribution uniform(std::size_t n);
  // (count_i + 1) / (total + N).
  static SymbolDistribution laplace_smoothed(std::span<const std::uint64_t> counts);

  std::size_t size() const { return weights_.size(); }
  std::uint64_t weight(std::size_t i) const { return weights_[i]; }
  std::uint64_t total() const { return total_; }
  double probability(std::size_t i) const {
    return static_cast<double>(weights_[i]) / static_cast<double>(total_);
  }
  const std::vector<std::uint64_t>& weights() const { return weights_; }
  std::vector<double> probabilities() const;

  // Shannon entropy in bits.
  double entropy_bits() const;

  bool operator==(const SymbolDistribution&) const = default;

 private:
  std::vector<std::uint64_t> weights_;
  std::uint64_t total_ = 0;
};

// The cloud-published target distribution and outsource size.
struct Policy {
  SymbolDistribution distribution;
  std::size_t n_b = 0;
  std::uint32_t version = 0;

  bool operator==(const Policy&) const = default;
};

// k = 4 packs two symbols per byte (first in the high nibble); every other k
// uses one byte per symbol. Trailing pad bits are zero.
std::vector<std::uint8_t> pack_symbols(std::span<const Symbol> symbols, unsigned k);
SymbolString unpack_symbols(std::span<const std::uint8_t> bytes, std::size_t count,
                            unsigned k);
std::size_t packed_size(std::size_t count, unsigned k);

}  // namespace bonsai

template <>
struct std::hash<bonsai::FileId> {
  std::size_t operator()(const bonsai::FileId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<bonsai::BasePointer> {
  std::size_t operator()(const bonsai::BasePointer& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.value);
  }
};

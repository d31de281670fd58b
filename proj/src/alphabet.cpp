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

#include "bonsai/alphabet.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bonsai/error.hpp"

namespace bonsai {

SystemConfig SystemConfig::make(unsigned k, std::size_t n_o, std::size_t n_b,
                                std::size_t t) {
  SystemConfig c;
  c.k = k;
  c.n_o = n_o;
  c.n_b = n_b;
  c.t = t;
  c.zones_enabled = k >= 4;
  c.validate();
  return c;
}

void SystemConfig::validate() const {
  if (k < 2 || k > 8 || k % 2 != 0) {
    fail(ErrorKind::kParameter, "k must be even and in [2, 8], got " + std::to_string(k));
  }
  if (n_b == 0 || n_b > n_o) {
    fail(ErrorKind::kParameter, "need 1 <= n_b <= n_o, got n_b=" + std::to_string(n_b) +
                                    " n_o=" + std::to_string(n_o));
  }
  if (n_b > 65535) {
    // The change record counts swaps in a u16.
    fail(ErrorKind::kParameter, "n_b must fit the 16-bit swap count");
  }
  if (t == 0) fail(ErrorKind::kParameter, "t must be at least 1");
  if (seed_bits == 0 || fid_bits == 0 || pointer_bits == 0) {
    fail(ErrorKind::kParameter, "seed, id and pointer widths must be positive");
  }
}

SymbolDistribution SymbolDistribution::from_weights(std::vector<std::uint64_t> weights) {
  if (weights.empty()) fail(ErrorKind::kParameter, "distribution over an empty alphabet");
  std::uint64_t total = 0;
  for (auto w : weights) {
    if (total + w < total) fail(ErrorKind::kRange, "distribution weights overflow");
    total += w;
  }
  if (total == 0) fail(ErrorKind::kParameter, "distribution has zero total weight");
  if (total > (std::uint64_t{1} << 62)) {
    fail(ErrorKind::kRange, "distribution total exceeds 2^62");
  }
  SymbolDistribution d;
  d.weights_ = std::move(weights);
  d.total_ = total;
  return d;
}

SymbolDistribution SymbolDistribution::from_probabilities(std::span<const double> probs) {
  constexpr double kScale = 1099511627776.0;  // 2^40
  double sum = 0;
  for (double p : probs) {
    if (!(p >= 0) || !std::isfinite(p)) {
      fail(ErrorKind::kParameter, "probabilities must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > std::ldexp(1.0, -20)) {
    fail(ErrorKind::kParameter, "probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  std::vector<std::uint64_t> w(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    w[i] = static_cast<std::uint64_t>(std::llround(probs[i] * kScale));
  }
  return from_weights(std::move(w));
}

SymbolDistribution SymbolDistribution::uniform(std::size_t n) {
  return from_weights(std::vector<std::uint64_t>(n, 1));
}

SymbolDistribution SymbolDistribution::laplace_smoothed(
    std::span<const std::uint64_t> counts) {
  std::vector<std::uint64_t> w(counts.begin(), counts.end());
  for (auto& x : w) ++x;
  return from_weights(std::move(w));
}

std::vector<double> SymbolDistribution::probabilities() const {
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = probability(i);
  return p;
}

double SymbolDistribution::entropy_bits() const {
  double h = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0) continue;
    const double p = probability(i);
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t packed_size(std::size_t count, unsigned k) {
  return k == 4 ? (count + 1) / 2 : count;
}

std::vector<std::uint8_t> pack_symbols(std::span<const Symbol> symbols, unsigned k) {
  const unsigned limit = k >= 8 ? 256u : (1u << k);
  for (Symbol s : symbols) {
    if (s >= limit) {
      fail(ErrorKind::kRange, "symbol " + std::to_string(s) + " does not fit in " +
                                  std::to_string(k) + " bits");
    }
  }
  if (k != 4) return {symbols.begin(), symbols.end()};
  std::vector<std::uint8_t> out(packed_size(symbols.size(), 4), 0);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out[i / 2] |= static_cast<std::uint8_t>(i % 2 == 0 ? symbols[i] << 4 : symbols[i]);
  }
  return out;
}

SymbolString unpack_symbols(std::span<const std::uint8_t> bytes, std::size_t count,
                            unsigned k) {
  if (bytes.size() < packed_size(count, k)) {
    fail(ErrorKind::kDecode, "truncated symbol string: " + std::to_string(bytes.size()) +
                                 " bytes cannot hold " + std::to_string(count) + " symbols");
  }
  SymbolString out(count);
  if (k != 4) {
    const unsigned limit = k >= 8 ? 256u : (1u << k);
    for (std::size_t i = 0; i < count; ++i) {
      if (bytes[i] >= limit) fail(ErrorKind::kDecode, "symbol exceeds the k-bit range");
      out[i] = bytes[i];
    }
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t b = bytes[i / 2];
    out[i] = static_cast<Symbol>(i % 2 == 0 ? b >> 4 : b & 0x0F);
  }
  return out;
}

}  // namespace bonsai

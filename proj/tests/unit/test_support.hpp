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

// Hand-rolled generators for the property tests. Everything is seeded so a
// failure reproduces from the printed seed.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "bonsai/alphabet.hpp"
#include "bonsai/prng.hpp"

namespace bonsai::testing {

class Gen {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  result_type operator()() { return rng_(); }

  std::uint64_t u64() { return rng_(); }
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return (rng_() & 1) != 0; }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  SymbolString symbols(std::size_t n, unsigned k) {
    SymbolString s(n);
    for (auto& x : s) x = static_cast<Symbol>(below(std::uint64_t{1} << k));
    return s;
  }

  // Symbols concentrated on a few values, so histograms repeat.
  SymbolString skewed_symbols(std::size_t n, unsigned k) {
    SymbolString s(n);
    const std::uint64_t hot = range(1, 4);
    for (auto& x : s) {
      x = static_cast<Symbol>(coin() || coin() ? below(hot) : below(std::uint64_t{1} << k));
    }
    return s;
  }

  std::vector<std::uint64_t> weights(std::size_t n, std::uint64_t max_weight) {
    std::vector<std::uint64_t> w(n);
    bool any = false;
    for (auto& x : w) {
      x = below(max_weight + 1);
      any = any || x > 0;
    }
    if (!any) w[below(n)] = 1;
    return w;
  }

 private:
  SplitMix64 rng_;
};

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("bonsai-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace bonsai::testing

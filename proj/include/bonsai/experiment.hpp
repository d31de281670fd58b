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
#include <string>
#include <vector>

#include "bonsai/alphabet.hpp"
#include "bonsai/cloud_engine.hpp"
#include "bonsai/metrics.hpp"

namespace bonsai {

struct RunResult {
  SystemConfig config;
  CompressionReport report;
  EngineStats stats;
  double seconds = 0;
};

// Pushes every full n_o-symbol chunk of `corpus` through transform and a
// fresh engine, then reports measured and model compression. With `verify`
// set every chunk is also decompressed and rebuilt.
RunResult run_compression(std::span<const Symbol> corpus, const SystemConfig& config,
                          EngineOptions options = {}, std::uint64_t seed = 1,
                          bool verify = false);

// One run per n_del, each on a fresh engine.
std::vector<RunResult> sweep_n_del(std::span<const Symbol> corpus, SystemConfig base,
                                   std::span<const std::size_t> n_del_values,
                                   EngineOptions options = {}, std::uint64_t seed = 1);

// H used by the cloud model: n_b times the entropy of the row distribution.
double addendum_entropy_bits(const BracketTable& table, std::size_t n_b);

// Closed-form weak lines and toy-scale strong uncertainty as CSV:
// adversary,prng_broken,n_o,n_b,k,m_log2,uncertainty_bits,leakage.
std::string privacy_grid_csv(std::size_t n_o, unsigned k, std::size_t max_n_del,
                             bool include_strong, std::uint64_t seed);

// Top-g hit fractions as CSV: g,hit_fraction,candidates,trials.
std::string rank_curve_csv(const SystemConfig& config, std::size_t trials, bool prng_broken,
                           std::uint64_t seed);

}  // namespace bonsai

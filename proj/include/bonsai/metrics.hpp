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

#include <cstdint>
#include <string>

#include "bonsai/alphabet.hpp"

namespace bonsai {

// Raw bit counts gathered from one batch of uploads. Client terms come from
// the serialized deviation store; cloud terms from the engine's records and
// forest.
struct CompressionComponents {
  std::uint64_t files = 0;
  std::uint64_t original_bits = 0;

  std::uint64_t deleted_value_bits = 0;
  std::uint64_t seed_bits = 0;
  std::uint64_t invert_bits = 0;
  std::uint64_t client_id_bits = 0;
  std::uint64_t client_store_bits = 0;  // 8 x serialized deviation bytes

  std::uint64_t forest_bits = 0;
  std::uint64_t addendum_bits = 0;
  std::uint64_t change_bits = 0;
  std::uint64_t changed_value_bits = 0;
  std::uint64_t cloud_id_bits = 0;
  std::uint64_t pointer_bits = 0;
  std::uint64_t swaps = 0;

  std::uint64_t cloud_bits() const {
    return forest_bits + addendum_bits + change_bits + changed_value_bits + cloud_id_bits +
           pointer_bits;
  }
};

struct CompressionReport {
  CompressionComponents components;
  double mean_swaps = 0;
  double addendum_entropy_bits = 0;  // H used by the cloud model, per record

  double ucr_measured = 0;
  double ucr_model = 0;
  double ccr_measured = 0;
  double ccr_model = 0;
  double tcr_measured = 0;
  double tcr_model = 0;
};

// Client ratio: (seed_bits + n_del*k + fid_bits + 1) / (k*n_o). Independent of n_f.
double ucr_model(const SystemConfig& config);

// Cloud ratio: (forest_bits + n_f*(H + 3*n_o + swaps*ceil(log2 n_b) + fid_bits + pointer_bits))
// / (n_f*k*n_o), with `mean_swaps` the average swap count per record.
double ccr_model(const SystemConfig& config, std::uint64_t n_f, double entropy_bits,
                 double mean_swaps, double forest_bits);

// Per-file overhead c = seed_bits + pointer_bits + 2*fid_bits + 1.
std::uint64_t tcr_constant(const SystemConfig& config);

// (forest_bits + n_f*(c + H + n_del*k + 3*n_o + swaps*ceil(log2 n_b))) / (n_f*k*n_o).
double tcr_model(const SystemConfig& config, std::uint64_t n_f, double entropy_bits,
                 double mean_swaps, double forest_bits);

CompressionReport compression_report(const SystemConfig& config,
                                     const CompressionComponents& components,
                                     double entropy_bits);

// CSV with one row per report.
std::string csv_header();
std::string csv_row(const SystemConfig& config, const CompressionReport& report);

}  // namespace bonsai

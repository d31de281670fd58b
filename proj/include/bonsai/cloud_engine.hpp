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
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "bonsai/alphabet.hpp"
#include "bonsai/base_forest.hpp"
#include "bonsai/bits.hpp"
#include "bonsai/bracket_codec.hpp"
#include "bonsai/swap_sort.hpp"

namespace bonsai {

// Everything the cloud keeps per upload, plus the table version the record
// was encoded under.
struct StoredRecord {
  FileId file_id;
  std::uint32_t table_version = 0;
  BasePointer base_pointer;
  BitString addendum;
  Change change;
  BitString changed_values;

  bool operator==(const StoredRecord&) const = default;
};

struct EngineOptions {
  // Run setup() automatically after this many uploads; 0 disables it.
  std::uint64_t refresh_every = 10000;
};

// Bit totals over every stored record. Measured sizes, not model values.
struct EngineStats {
  std::uint64_t records = 0;
  std::uint64_t bases = 0;
  std::uint64_t forest_nodes = 0;
  std::uint64_t forest_bits = 0;
  std::uint64_t addendum_bits = 0;
  std::uint64_t change_bits = 0;  // bitmap + swap positions
  std::uint64_t changed_value_bits = 0;
  std::uint64_t swaps = 0;
  std::uint64_t id_bits = 0;
  std::uint64_t pointer_bits = 0;
  std::uint32_t table_versions = 0;

  // forest + per record (addendum + change + changed values + id + pointer).
  std::uint64_t total_bits() const {
    return forest_bits + addendum_bits + change_bits + changed_value_bits + id_bits +
           pointer_bits;
  }
};

// The cloud side: policy generation, Dedup, Decompress and record storage.
// dedup() and setup() take the state lock exclusively; reads share it.
class CloudEngine {
 public:
  explicit CloudEngine(SystemConfig config, EngineOptions options = {});

  const SystemConfig& config() const { return config_; }

  // Rebuilds the policy from the raw symbol histogram, Laplace smoothed. If
  // nothing changed since the last setup the active version is kept.
  Policy setup();

  Policy policy() const;
  // Histogram the active policy was computed from; clients smooth it
  // themselves to obtain the same distribution.
  std::vector<std::uint64_t> policy_counts() const;

  StoredRecord dedup(FileId file_id, std::span<const Symbol> outsource);
  Outsource decompress(FileId file_id) const;

  bool contains(FileId file_id) const;
  std::size_t record_count() const;
  EngineStats stats() const;

  // Read access for tests and tooling; do not call concurrently with dedup.
  const BaseForest& forest() const { return forest_; }
  const BracketTable& table(std::uint32_t version) const;
  StoredRecord record(FileId file_id) const;

  // Writes forest.snap, records.log and policies.bin into `dir`.
  void save(const std::filesystem::path& dir) const;
  static std::unique_ptr<CloudEngine> load(const std::filesystem::path& dir,
                                           EngineOptions options = {});

 private:
  struct Version {
    std::vector<std::uint64_t> counts;
    Policy policy;
    std::shared_ptr<const BracketTable> table;
  };

  Policy setup_locked();
  void add_version(std::vector<std::uint64_t> counts);

  SystemConfig config_;
  EngineOptions options_;
  mutable std::shared_mutex mutex_;
  BaseForest forest_;
  std::unordered_map<FileId, StoredRecord> records_;
  std::vector<FileId> order_;  // insertion order, for persistence
  std::vector<std::uint64_t> histogram_;
  std::uint64_t uploads_since_setup_ = 0;
  std::vector<Version> versions_;
};

// Record log entry: file_id u64, table_version u32, base_pointer u64, then
// addendum, change and changed values, each as u32 bit length + bytes.
std::vector<std::uint8_t> encode_record(const StoredRecord& record, std::size_t n_b);
StoredRecord decode_record(std::span<const std::uint8_t> bytes, std::size_t n_b,
                           std::size_t* consumed = nullptr);

}  // namespace bonsai

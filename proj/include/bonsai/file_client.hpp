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
#include <span>
#include <string>
#include <vector>

#include "bonsai/alphabet.hpp"
#include "bonsai/error.hpp"
#include "bonsai/net.hpp"

namespace bonsai {

// The local deviation store is missing or unreadable.
class StoreError : public Error {
 public:
  explicit StoreError(const std::string& message) : Error(ErrorKind::kNotFound, message) {}
};

// The manifest disagrees with itself, the store or the retrieved data.
class ManifestError : public Error {
 public:
  explicit ManifestError(const std::string& message) : Error(ErrorKind::kDecode, message) {}
};

struct ChunkedFile {
  std::vector<Chunk> chunks;
  std::size_t pad_symbols = 0;  // zero symbols appended to the last chunk
};

// Splits bytes into n_o-symbol chunks, most significant bits of each byte
// first. Needs k in {2, 4, 8}; an empty input gives zero chunks.
ChunkedFile chunk_bytes(std::span<const std::uint8_t> data, const SystemConfig& config);
std::vector<std::uint8_t> reassemble(std::span<const Chunk> chunks, std::size_t byte_length,
                                     unsigned k);

struct ManifestEntry {
  FileId file_id;
  std::uint64_t index = 0;
  bool operator==(const ManifestEntry&) const = default;
};

// JSON document describing one uploaded file.
struct Manifest {
  std::string file_name;
  std::uint64_t byte_length = 0;
  SystemConfig config;
  std::uint64_t pad_symbols = 0;
  std::vector<ManifestEntry> chunks;
  std::string deviation_store;  // file name inside the store directory

  std::string to_json() const;
  static Manifest from_json(const std::string& text);
  // Internal consistency: chunk count, pad and indices agree with byte_length.
  void validate() const;

  bool operator==(const Manifest&) const = default;
};

struct UploadOptions {
  std::uint64_t rng_seed = 0;  // 0 seeds from std::random_device
};

struct UploadSummary {
  Manifest manifest;
  std::filesystem::path manifest_path;
  std::uint64_t store_bytes = 0;
  std::uint64_t new_chunks = 0;
};

// Upload: fetch the policy, transform every chunk, send the outsources and
// keep the deviations plus a manifest in `store_dir`. n_b always comes from
// the server's policy; config.k must match the server's k.
UploadSummary upload_file(CloudEndpoint& cloud, const std::filesystem::path& file,
                          SystemConfig config, const std::filesystem::path& store_dir,
                          UploadOptions options = {});

// Get: fetch every outsource, rebuild the chunks and reassemble the bytes.
std::vector<std::uint8_t> retrieve_file(CloudEndpoint& cloud, const Manifest& manifest,
                                        const std::filesystem::path& store_dir);

Manifest read_manifest(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace bonsai

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

#include "bonsai/file_client.hpp"

#include <fstream>
#include <iterator>
#include <random>

#include <json.hpp>

#include "bonsai/client_transform.hpp"
#include "bonsai/prng.hpp"

namespace bonsai {
namespace {

unsigned symbols_per_byte(unsigned k) {
  if (k != 2 && k != 4 && k != 8) {
    fail(ErrorKind::kParameter, "file chunking needs k in {2, 4, 8}, got " + std::to_string(k));
  }
  return 8 / k;
}

}  // namespace

ChunkedFile chunk_bytes(std::span<const std::uint8_t> data, const SystemConfig& config) {
  config.validate();
  const unsigned per_byte = symbols_per_byte(config.k);
  const std::size_t total = data.size() * per_byte;
  const Symbol mask = config.max_symbol();
  ChunkedFile out;
  if (total == 0) return out;
  const std::size_t count = (total + config.n_o - 1) / config.n_o;
  out.pad_symbols = count * config.n_o - total;
  out.chunks.assign(count, Chunk(config.n_o, 0));
  std::size_t i = 0;
  for (std::uint8_t byte : data) {
    for (unsigned j = per_byte; j-- > 0; ++i) {
      out.chunks[i / config.n_o][i % config.n_o] =
          static_cast<Symbol>((byte >> (j * config.k)) & mask);
    }
  }
  return out;
}

std::vector<std::uint8_t> reassemble(std::span<const Chunk> chunks, std::size_t byte_length,
                                     unsigned k) {
  const unsigned per_byte = symbols_per_byte(k);
  std::vector<std::uint8_t> out(byte_length, 0);
  std::size_t need = byte_length * per_byte;
  std::size_t i = 0;
  for (const auto& chunk : chunks) {
    for (Symbol s : chunk) {
      if (i == need) break;
      auto& b = out[i / per_byte];
      b = static_cast<std::uint8_t>(b | (s << ((per_byte - 1 - i % per_byte) * k)));
      ++i;
    }
  }
  if (i != need) fail(ErrorKind::kParameter, "chunks hold fewer symbols than the byte length needs");
  return out;
}

std::string Manifest::to_json() const {
  nlohmann::json j;
  j["file_name"] = file_name;
  j["byte_length"] = byte_length;
  j["k"] = config.k;
  j["n_o"] = config.n_o;
  j["n_b"] = config.n_b;
  j["t"] = config.t;
  j["zones"] = config.zones_enabled;
  j["pad_symbols"] = pad_symbols;
  j["deviation_store"] = deviation_store;
  auto& arr = j["chunks"] = nlohmann::json::array();
  for (const auto& c : chunks) {
    arr.push_back({{"file_id", c.file_id.value}, {"index", c.index}});
  }
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
  Manifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.file_name = j.at("file_name").get<std::string>();
    m.byte_length = j.at("byte_length").get<std::uint64_t>();
    m.config.k = j.at("k").get<unsigned>();
    m.config.n_o = j.at("n_o").get<std::size_t>();
    m.config.n_b = j.at("n_b").get<std::size_t>();
    m.config.t = j.at("t").get<std::size_t>();
    m.config.zones_enabled = j.at("zones").get<bool>();
    m.pad_symbols = j.at("pad_symbols").get<std::uint64_t>();
    m.deviation_store = j.at("deviation_store").get<std::string>();
    for (const auto& c : j.at("chunks")) {
      m.chunks.push_back({FileId{c.at("file_id").get<std::uint64_t>()},
                          c.at("index").get<std::uint64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
  m.validate();
  return m;
}

void Manifest::validate() const {
  try {
    config.validate();
  } catch (const Error& e) {
    throw ManifestError(std::string("manifest config: ") + e.what());
  }
  if (config.k != 2 && config.k != 4 && config.k != 8) {
    throw ManifestError("manifest k must be 2, 4 or 8");
  }
  const std::uint64_t symbols = byte_length * (8 / config.k);
  const std::uint64_t expect_chunks = (symbols + config.n_o - 1) / config.n_o;
  if (chunks.size() != expect_chunks) {
    throw ManifestError("manifest lists " + std::to_string(chunks.size()) + " chunks, byte length needs " +
                        std::to_string(expect_chunks));
  }
  if (expect_chunks * config.n_o - symbols != pad_symbols) {
    throw ManifestError("manifest pad does not match its byte length");
  }
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].index != i) throw ManifestError("manifest chunk indices are not 0..n-1");
  }
  if (deviation_store.empty() || deviation_store.find('/') != std::string::npos) {
    throw ManifestError("manifest deviation store must be a plain file name");
  }
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kNotFound, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kInternal, "short write to " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  return Manifest::from_json(std::string(std::istreambuf_iterator<char>(in), {}));
}

UploadSummary upload_file(CloudEndpoint& cloud, const std::filesystem::path& file,
                          SystemConfig config, const std::filesystem::path& store_dir,
                          UploadOptions options) {
  const PolicyMsg policy_msg = cloud.fetch_policy();
  if (policy_msg.k != config.k) {
    fail(ErrorKind::kParameter, "server uses k=" + std::to_string(policy_msg.k) +
                                    ", client asked for k=" + std::to_string(config.k));
  }
  config.n_b = policy_msg.n_b;
  config.validate();
  const Policy policy = policy_msg.to_policy();

  const auto data = read_bytes(file);
  const ChunkedFile chunked = chunk_bytes(data, config);

  std::uint64_t seed = options.rng_seed;
  if (seed == 0) {
    std::random_device rd;
    seed = (std::uint64_t{rd()} << 32) ^ rd();
  }
  SplitMix64 rng(seed);

  UploadSummary summary;
  Manifest& m = summary.manifest;
  m.file_name = file.filename().string();
  m.byte_length = data.size();
  m.config = config;
  m.pad_symbols = chunked.pad_symbols;
  m.deviation_store = m.file_name + ".dev";

  std::vector<std::uint8_t> store;
  for (std::size_t i = 0; i < chunked.chunks.size(); ++i) {
    const auto seeds = draw_seeds(config.t, rng);
    for (int attempt = 0;; ++attempt) {
      const FileId id{rng()};
      auto tr = transform(chunked.chunks[i], policy, seeds, config, id);
      const UploadStatus status = cloud.upload(id, tr.outsource, config.k);
      if (status == UploadStatus::kOk) {
        const auto rec = encode_deviation(tr.deviation, config.k);
        store.insert(store.end(), rec.begin(), rec.end());
        m.chunks.push_back({id, i});
        ++summary.new_chunks;
        break;
      }
      if (status != UploadStatus::kDuplicate || attempt >= 8) {
        fail(ErrorKind::kProtocol, "server rejected chunk " + std::to_string(i) + " with status " +
                                       std::to_string(static_cast<int>(status)));
      }
    }
  }

  std::filesystem::create_directories(store_dir);
  write_bytes(store_dir / m.deviation_store, store);
  summary.store_bytes = store.size();
  summary.manifest_path = store_dir / (m.file_name + ".manifest.json");
  const std::string json = m.to_json();
  write_bytes(summary.manifest_path,
              std::span(reinterpret_cast<const std::uint8_t*>(json.data()), json.size()));
  return summary;
}

std::vector<std::uint8_t> retrieve_file(CloudEndpoint& cloud, const Manifest& manifest,
                                        const std::filesystem::path& store_dir) {
  manifest.validate();
  const SystemConfig& config = manifest.config;
  const auto store_path = store_dir / manifest.deviation_store;
  if (!std::filesystem::is_regular_file(store_path)) {
    throw StoreError("deviation store " + store_path.string() + " is missing");
  }
  const auto store = read_bytes(store_path);

  std::vector<Chunk> chunks;
  chunks.reserve(manifest.chunks.size());
  std::span<const std::uint8_t> rest(store);
  for (const auto& entry : manifest.chunks) {
    ClientDeviation dev;
    std::size_t used = 0;
    try {
      dev = decode_deviation(rest, config.k, &used);
    } catch (const Error& e) {
      throw ManifestError("deviation store does not match the manifest: " + std::string(e.what()));
    }
    rest = rest.subspan(used);
    if (dev.file_id != entry.file_id || dev.deleted_values.size() != config.n_del()) {
      throw ManifestError("deviation record for chunk " + std::to_string(entry.index) +
                          " does not match the manifest");
    }
    auto outsource = cloud.get(entry.file_id, config.k);
    if (!outsource) {
      fail(ErrorKind::kNotFound, "server has no chunk with id " + std::to_string(entry.file_id.value));
    }
    if (outsource->size() != config.n_b) {
      throw ManifestError("server returned " + std::to_string(outsource->size()) +
                          " symbols, manifest expects n_b=" + std::to_string(config.n_b));
    }
    chunks.push_back(reconstruct(*outsource, dev, config));
  }
  if (!rest.empty()) throw ManifestError("deviation store has records beyond the manifest");
  return reassemble(chunks, manifest.byte_length, config.k);
}

}  // namespace bonsai

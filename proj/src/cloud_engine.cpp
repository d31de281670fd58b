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

#include "bonsai/cloud_engine.hpp"

#include <fstream>
#include <iterator>
#include <mutex>
#include <string>

#include "bonsai/byte_io.hpp"
#include "bonsai/error.hpp"

namespace bonsai {
namespace {

constexpr std::uint32_t kPolicyMagic = 0x504E5342;  // "BSNP"

void put_bits(ByteWriter& w, const BitString& bits) {
  w.u32(static_cast<std::uint32_t>(bits.size()));
  w.bytes(bits.bytes());
}

BitString get_bits(ByteReader& r) {
  const std::size_t n = r.u32();
  auto raw = r.bytes((n + 7) / 8);
  return BitString::from_bytes(std::vector<std::uint8_t>(raw.begin(), raw.end()), n);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  // Write then rename so a crash never leaves a half-written file behind.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kNotFound, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::kInternal, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::vector<std::uint8_t> encode_record(const StoredRecord& record, std::size_t n_b) {
  ByteWriter w;
  w.u64(record.file_id.value);
  w.u32(record.table_version);
  w.u64(record.base_pointer.value);
  put_bits(w, record.addendum);
  const auto change = serialize_change(record.change, n_b);
  w.u32(static_cast<std::uint32_t>(change.size() * 8));
  w.bytes(change);
  put_bits(w, record.changed_values);
  return w.take();
}

StoredRecord decode_record(std::span<const std::uint8_t> bytes, std::size_t n_b,
                           std::size_t* consumed) {
  ByteReader r(bytes);
  StoredRecord rec;
  rec.file_id = FileId{r.u64()};
  rec.table_version = r.u32();
  rec.base_pointer = BasePointer{r.u64()};
  rec.addendum = get_bits(r);
  const std::size_t change_bits = r.u32();
  if (change_bits % 8 != 0) fail(ErrorKind::kDecode, "change record is not byte aligned");
  rec.change = deserialize_change(r.bytes(change_bits / 8), n_b);
  rec.changed_values = get_bits(r);
  if (consumed) *consumed = r.position();
  return rec;
}

CloudEngine::CloudEngine(SystemConfig config, EngineOptions options)
    : config_(config), options_(options), forest_((config.validate(), config.n_b)) {
  histogram_.assign(config_.alphabet_size(), 0);
  add_version(histogram_);
}

void CloudEngine::add_version(std::vector<std::uint64_t> counts) {
  Version v;
  v.policy.distribution = SymbolDistribution::laplace_smoothed(counts);
  v.policy.n_b = config_.n_b;
  v.policy.version = static_cast<std::uint32_t>(versions_.size());
  v.table = std::make_shared<const BracketTable>(
      BracketTable::build(v.policy.distribution, config_));
  v.counts = std::move(counts);
  versions_.push_back(std::move(v));
}

Policy CloudEngine::setup() {
  std::unique_lock lock(mutex_);
  return setup_locked();
}

Policy CloudEngine::setup_locked() {
  uploads_since_setup_ = 0;
  const auto& current = versions_.back();
  if (SymbolDistribution::laplace_smoothed(histogram_) != current.policy.distribution) {
    add_version(histogram_);
  }
  return versions_.back().policy;
}

Policy CloudEngine::policy() const {
  std::shared_lock lock(mutex_);
  return versions_.back().policy;
}

std::vector<std::uint64_t> CloudEngine::policy_counts() const {
  std::shared_lock lock(mutex_);
  return versions_.back().counts;
}

const BracketTable& CloudEngine::table(std::uint32_t version) const {
  std::shared_lock lock(mutex_);
  if (version >= versions_.size()) {
    fail(ErrorKind::kNotFound, "unknown table version " + std::to_string(version));
  }
  return *versions_[version].table;
}

StoredRecord CloudEngine::dedup(FileId file_id, std::span<const Symbol> outsource) {
  if (outsource.size() != config_.n_b) {
    fail(ErrorKind::kParameter, "outsource has " + std::to_string(outsource.size()) +
                                    " symbols, expected n_b=" + std::to_string(config_.n_b));
  }
  for (Symbol s : outsource) {
    if (s > config_.max_symbol()) fail(ErrorKind::kRange, "outsource symbol outside the alphabet");
  }

  std::unique_lock lock(mutex_);
  if (records_.contains(file_id)) {
    fail(ErrorKind::kConflict, "file id " + std::to_string(file_id.value) + " already stored");
  }
  const auto& version = versions_.back();
  const BracketTable& table = *version.table;

  StoredRecord rec;
  rec.file_id = file_id;
  rec.table_version = version.policy.version;
  SplitResult parts;
  if (table.zones_enabled()) {
    auto moved = change_values(outsource, table);
    rec.changed_values = std::move(moved.changed_values);
    parts = split(moved.chnv, table);
  } else {
    parts = split(outsource, table);
  }
  rec.addendum = std::move(parts.addendum);
  const BaseString base = sort_bids(parts.bids);
  const auto swaps = find_swaps(parts.bids, base);
  rec.change = encode_change(swaps, config_.n_b);
  rec.base_pointer = forest_.insert(base).pointer;

  for (Symbol s : outsource) ++histogram_[s];
  records_.emplace(file_id, rec);
  order_.push_back(file_id);
  ++uploads_since_setup_;
  if (options_.refresh_every != 0 && uploads_since_setup_ >= options_.refresh_every) {
    setup_locked();
  }
  return rec;
}

Outsource CloudEngine::decompress(FileId file_id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(file_id);
  if (it == records_.end()) {
    fail(ErrorKind::kNotFound, "no record for file id " + std::to_string(file_id.value));
  }
  const StoredRecord& rec = it->second;
  const BaseString base = forest_.get_base(rec.base_pointer);
  const BidString bids = apply_change_inverse(base, rec.change);
  return merge(bids, rec.addendum, rec.changed_values, *versions_.at(rec.table_version).table);
}

bool CloudEngine::contains(FileId file_id) const {
  std::shared_lock lock(mutex_);
  return records_.contains(file_id);
}

std::size_t CloudEngine::record_count() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

StoredRecord CloudEngine::record(FileId file_id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(file_id);
  if (it == records_.end()) {
    fail(ErrorKind::kNotFound, "no record for file id " + std::to_string(file_id.value));
  }
  return it->second;
}

EngineStats CloudEngine::stats() const {
  std::shared_lock lock(mutex_);
  EngineStats s;
  s.records = records_.size();
  s.bases = forest_.leaf_count();
  s.forest_nodes = forest_.node_count();
  s.forest_bits = forest_.size_bits(versions_.back().table->bid_bits(), config_.pointer_bits);
  for (const auto& [id, rec] : records_) {
    s.addendum_bits += rec.addendum.size();
    s.change_bits += change_payload_bits(rec.change, config_.n_b);
    s.changed_value_bits += rec.changed_values.size();
    s.swaps += rec.change.positions.size();
  }
  s.id_bits = s.records * config_.fid_bits;
  s.pointer_bits = s.records * config_.pointer_bits;
  s.table_versions = static_cast<std::uint32_t>(versions_.size());
  return s;
}

void CloudEngine::save(const std::filesystem::path& dir) const {
  std::shared_lock lock(mutex_);
  std::filesystem::create_directories(dir);

  ByteWriter pol;
  pol.u32(kPolicyMagic);
  pol.u8(static_cast<std::uint8_t>(config_.k));
  pol.u32(static_cast<std::uint32_t>(config_.n_o));
  pol.u32(static_cast<std::uint32_t>(config_.n_b));
  pol.u32(static_cast<std::uint32_t>(config_.t));
  pol.u8(config_.zones_enabled ? 1 : 0);
  pol.u8(static_cast<std::uint8_t>(config_.seed_bits));
  pol.u8(static_cast<std::uint8_t>(config_.fid_bits));
  pol.u8(static_cast<std::uint8_t>(config_.pointer_bits));
  pol.u32(static_cast<std::uint32_t>(versions_.size()));
  for (const auto& v : versions_) {
    for (auto c : v.counts) pol.u64(c);
  }
  for (auto c : histogram_) pol.u64(c);
  pol.u64(uploads_since_setup_);
  write_file(dir / "policies.bin", pol.take());

  write_file(dir / "forest.snap", forest_.serialize());

  ByteWriter log;
  for (const auto& id : order_) {
    log.bytes(encode_record(records_.at(id), config_.n_b));
  }
  write_file(dir / "records.log", log.take());
}

std::unique_ptr<CloudEngine> CloudEngine::load(const std::filesystem::path& dir,
                                               EngineOptions options) {
  const auto pol_bytes = read_file(dir / "policies.bin");
  ByteReader pol(pol_bytes);
  if (pol.u32() != kPolicyMagic) fail(ErrorKind::kDecode, "policies.bin has a bad magic");
  SystemConfig config;
  config.k = pol.u8();
  config.n_o = pol.u32();
  config.n_b = pol.u32();
  config.t = pol.u32();
  config.zones_enabled = pol.u8() != 0;
  config.seed_bits = pol.u8();
  config.fid_bits = pol.u8();
  config.pointer_bits = pol.u8();
  config.validate();

  auto engine = std::make_unique<CloudEngine>(config, options);
  const std::size_t n = config.alphabet_size();
  const std::uint32_t version_count = pol.u32();
  if (version_count == 0) fail(ErrorKind::kDecode, "policies.bin lists no versions");
  engine->versions_.clear();
  for (std::uint32_t v = 0; v < version_count; ++v) {
    std::vector<std::uint64_t> counts(n);
    for (auto& c : counts) c = pol.u64();
    engine->add_version(std::move(counts));
  }
  for (auto& c : engine->histogram_) c = pol.u64();
  engine->uploads_since_setup_ = pol.u64();
  if (!pol.done()) fail(ErrorKind::kDecode, "trailing bytes in policies.bin");

  engine->forest_ = BaseForest::deserialize(read_file(dir / "forest.snap"));
  if (engine->forest_.n_b() != config.n_b) fail(ErrorKind::kDecode, "forest n_b mismatch");

  const auto log = read_file(dir / "records.log");
  std::span<const std::uint8_t> rest(log);
  while (!rest.empty()) {
    std::size_t used = 0;
    StoredRecord rec = decode_record(rest, config.n_b, &used);
    rest = rest.subspan(used);
    if (rec.table_version >= version_count) {
      fail(ErrorKind::kDecode, "record references an unknown table version");
    }
    if (rec.base_pointer.value >= engine->forest_.leaf_count()) {
      fail(ErrorKind::kDecode, "record references a base missing from the forest");
    }
    const FileId id = rec.file_id;
    if (!engine->records_.emplace(id, std::move(rec)).second) {
      fail(ErrorKind::kDecode, "duplicate file id in records.log");
    }
    engine->order_.push_back(id);
  }
  return engine;
}

}  // namespace bonsai

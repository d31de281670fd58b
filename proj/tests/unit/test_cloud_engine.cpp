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

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "bonsai/bracket_codec.hpp"
#include "bonsai/client_transform.hpp"
#include "bonsai/cloud_engine.hpp"
#include "bonsai/error.hpp"
#include "test_support.hpp"

namespace bonsai {
namespace {

SystemConfig cfg(unsigned k, std::size_t n_o, std::size_t n_b, bool zones) {
  SystemConfig c = SystemConfig::make(k, n_o, n_b);
  c.zones_enabled = zones;
  return c;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

TEST(CloudEngine, FreshPolicyIsUniform) {
  CloudEngine e(cfg(4, 10, 8, true));
  const auto p = e.setup();
  EXPECT_EQ(p.n_b, 8u);
  EXPECT_EQ(p.distribution, SymbolDistribution::uniform(16));
}

TEST(CloudEngine, SetupSmoothsRawHistogram) {
  CloudEngine e(cfg(4, 10, 8, true));
  e.dedup(FileId{1}, SymbolString(8, 0));
  const auto p = e.setup();
  EXPECT_DOUBLE_EQ(p.distribution.probability(0), 9.0 / 24.0);
  for (std::size_t s = 1; s < 16; ++s) EXPECT_DOUBLE_EQ(p.distribution.probability(s), 1.0 / 24.0);
  EXPECT_EQ(p.version, 1u);
  const auto again = e.setup();
  EXPECT_EQ(again, p);
  EXPECT_EQ(e.stats().table_versions, 2u);
}

TEST(CloudEngine, IdenticalOutsourcesShareABase) {
  testing::Gen g(1);
  CloudEngine e(cfg(8, 64, 60, true));
  const auto o = g.symbols(60, 8);
  const auto r1 = e.dedup(FileId{10}, o);
  const auto nodes = e.forest().node_count();
  const auto r2 = e.dedup(FileId{11}, o);
  EXPECT_EQ(r1.base_pointer, r2.base_pointer);
  EXPECT_EQ(e.forest().node_count(), nodes);
  EXPECT_EQ(e.stats().bases, 1u);
  EXPECT_EQ(e.record_count(), 2u);
  EXPECT_EQ(e.decompress(FileId{10}), o);
  EXPECT_EQ(e.decompress(FileId{11}), o);
}

TEST(CloudEngine, WorkedOutsourcesFormOneTree) {
  const Symbol order[16] = {0, 4, 1, 5, 8, 12, 9, 13, 2, 6, 3, 7, 10, 14, 11, 15};
  std::vector<std::uint64_t> w(16);
  for (std::size_t r = 0; r < 16; ++r) w[order[r]] = 16 - r;
  const auto table = BracketTable::build(SymbolDistribution::from_weights(w), cfg(4, 11, 8, true));
  BaseForest forest(8);
  std::vector<BaseString> bases;
  for (const SymbolString& o : {SymbolString{4, 10, 8, 9, 1, 2, 12, 15},
                                SymbolString{4, 1, 9, 7, 2, 2, 12, 15}}) {
    const auto zoned = change_values(o, table);
    const auto parts = split(zoned.chnv, table);
    bases.push_back(sort_bids(parts.bids));
    forest.insert(bases.back());
  }
  EXPECT_EQ(bases[0], (BaseString{0, 0, 0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(bases[1], (BaseString{0, 0, 0, 0, 1, 1, 1, 1}));
  EXPECT_EQ(forest.root_count(), 1u);
  EXPECT_EQ(forest.leaf_count(), 2u);
}

TEST(CloudEngine, Errors) {
  CloudEngine e(cfg(4, 10, 8, true));
  e.dedup(FileId{1}, SymbolString(8, 3));
  EXPECT_EQ(kind_of([&] { e.dedup(FileId{1}, SymbolString(8, 2)); }), ErrorKind::kConflict);
  EXPECT_EQ(kind_of([&] { e.dedup(FileId{2}, SymbolString(7, 2)); }), ErrorKind::kParameter);
  EXPECT_EQ(kind_of([&] { e.dedup(FileId{3}, SymbolString(8, 16)); }), ErrorKind::kRange);
  EXPECT_EQ(kind_of([&] { e.decompress(FileId{99}); }), ErrorKind::kNotFound);
  EXPECT_FALSE(e.contains(FileId{2}));
  EXPECT_EQ(e.record_count(), 1u);
}

class RoundTrip : public ::testing::TestWithParam<std::tuple<unsigned, bool>> {};

TEST_P(RoundTrip, DecompressInvertsDedup) {
  const auto [k, zones] = GetParam();
  testing::Gen g(100 + k + (zones ? 1 : 0));
  const std::size_t n_b = 48;
  CloudEngine e(cfg(k, 50, n_b, zones), EngineOptions{.refresh_every = 1000});
  std::vector<SymbolString> uploads;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto o = (i % 3 == 0) ? g.skewed_symbols(n_b, k) : g.symbols(n_b, k);
    if (i % 50 == 7) o = uploads[g.below(uploads.size())];
    const auto rec = e.dedup(FileId{i}, o);
    ASSERT_EQ(rec.file_id, FileId{i});
    uploads.push_back(std::move(o));
  }
  EXPECT_GT(e.stats().table_versions, 5u);
  for (std::uint64_t i = 0; i < uploads.size(); ++i) ASSERT_EQ(e.decompress(FileId{i}), uploads[i]);
  const auto s = e.stats();
  EXPECT_EQ(s.records, 10000u);
  EXPECT_LT(s.bases, s.records);
}

INSTANTIATE_TEST_SUITE_P(KAndZones, RoundTrip,
                         ::testing::Combine(::testing::Values(4u, 8u), ::testing::Bool()));

TEST(CloudEngine, EndToEndWithClientTransform) {
  testing::Gen g(9);
  const auto config = cfg(4, 40, 34, true);
  CloudEngine e(config, EngineOptions{.refresh_every = 25});
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto chunk = g.skewed_symbols(40, 4);
    const auto seeds = draw_seeds(config.t, g);
    const auto tr = transform(chunk, e.policy(), seeds, config, FileId{i});
    e.dedup(FileId{i}, tr.outsource);
    ASSERT_EQ(reconstruct(e.decompress(FileId{i}), tr.deviation, config), chunk);
  }
}

TEST(CloudEngine, StatsMatchRecordSizes) {
  testing::Gen g(3);
  const auto config = cfg(8, 32, 30, true);
  CloudEngine e(config);
  std::uint64_t a = 0, cv = 0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto r = e.dedup(FileId{i}, g.symbols(30, 8));
    a += r.addendum.size();
    cv += r.changed_values.size();
  }
  const auto s = e.stats();
  EXPECT_EQ(s.addendum_bits, a);
  EXPECT_EQ(s.changed_value_bits, cv);
  EXPECT_EQ(s.id_bits, 40u * 64);
  EXPECT_EQ(s.pointer_bits, 40u * 64);
  // k = 8 with zones: four 8x8 zones, so a Bid takes 3 bits.
  EXPECT_EQ(s.forest_bits, e.forest().size_bits(3, 64));
}

TEST(CloudEngine, RecordEncodingRoundTrips) {
  testing::Gen g(4);
  CloudEngine e(cfg(8, 32, 30, true));
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto r = e.dedup(FileId{i}, g.symbols(30, 8));
    const auto bytes = encode_record(r, 30);
    std::size_t used = 0;
    EXPECT_EQ(decode_record(bytes, 30, &used), r);
    EXPECT_EQ(used, bytes.size());
  }
}

TEST(CloudEngine, SaveAndLoad) {
  testing::TempDir dir("engine");
  testing::Gen g(5);
  const auto config = cfg(4, 20, 16, true);
  std::vector<SymbolString> uploads;
  {
    CloudEngine e(config, EngineOptions{.refresh_every = 30});
    for (std::uint64_t i = 0; i < 100; ++i) {
      uploads.push_back(g.skewed_symbols(16, 4));
      e.dedup(FileId{i}, uploads.back());
    }
    e.save(dir.path);
  }
  auto loaded = CloudEngine::load(dir.path, EngineOptions{.refresh_every = 30});
  EXPECT_EQ(loaded->config(), config);
  EXPECT_EQ(loaded->record_count(), 100u);
  EXPECT_EQ(loaded->stats().table_versions, 4u);
  for (std::uint64_t i = 0; i < uploads.size(); ++i) EXPECT_EQ(loaded->decompress(FileId{i}), uploads[i]);
  // The restored engine keeps accepting uploads.
  loaded->dedup(FileId{500}, uploads[0]);
  EXPECT_EQ(loaded->record(FileId{500}).base_pointer, loaded->record(FileId{0}).base_pointer);
}

TEST(CloudEngine, LoadRejectsMissingDirectory) {
  EXPECT_THROW(CloudEngine::load("/nonexistent/bonsai-state"), std::exception);
}

}  // namespace
}  // namespace bonsai

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

#include <algorithm>

#include "bonsai/client_transform.hpp"
#include "bonsai/error.hpp"
#include "bonsai/experiment.hpp"
#include "bonsai/metrics.hpp"
#include "test_support.hpp"

namespace bonsai {
namespace {

TEST(Metrics, ClientRatioFixedOverheadOnly) {
  for (unsigned k : {2u, 4u, 8u}) {
    const auto c = SystemConfig::make(k, 64, 64);
    EXPECT_DOUBLE_EQ(ucr_model(c), 129.0 / (k * 64.0));
  }
}

TEST(Metrics, ClientRatioDefaults) {
  EXPECT_DOUBLE_EQ(ucr_model(SystemConfig::make(8, 256, 241)), 249.0 / 2048.0);
}

TEST(Metrics, ClientRatioVariableTermHalvesWithDoubledChunk) {
  const double fixed = 129.0;
  const double a = ucr_model(SystemConfig::make(8, 256, 241)) * 8 * 256 - fixed;
  const double b = ucr_model(SystemConfig::make(8, 512, 497)) * 8 * 512 - fixed;
  EXPECT_DOUBLE_EQ(a, b);  // same n_del, same absolute variable bits
  EXPECT_DOUBLE_EQ(a / (8 * 512), 0.5 * a / (8 * 256));
}

TEST(Metrics, CloudRatioDegenerate) {
  const auto c = SystemConfig::make(4, 100, 90);
  EXPECT_DOUBLE_EQ(ccr_model(c, 1, 0, 0, 0), (3.0 * 100 + 128) / (4.0 * 100));
}

TEST(Metrics, CloudRatioAmortisesForest) {
  const auto c = SystemConfig::make(8, 256, 241);
  const double per_record = ccr_model(c, 1, 500, 3, 0);
  const double one = ccr_model(c, 1, 500, 3, 10000);
  const double two = ccr_model(c, 2, 500, 3, 10000);
  EXPECT_DOUBLE_EQ(ccr_model(c, 2, 500, 3, 0), per_record);
  EXPECT_DOUBLE_EQ(one - per_record, 2 * (two - per_record));
  // Swap term uses ceil(log2 241) = 8 bits per swap.
  EXPECT_DOUBLE_EQ((ccr_model(c, 1, 0, 1, 0) - ccr_model(c, 1, 0, 0, 0)) * 2048, 8.0);
}

TEST(Metrics, TotalConstant) {
  EXPECT_EQ(tcr_constant(SystemConfig::make(8, 256, 241)), 257u);
  auto c = SystemConfig::make(8, 256, 241);
  c.seed_bits = 32;
  c.fid_bits = 16;
  c.pointer_bits = 40;
  EXPECT_EQ(tcr_constant(c), 32u + 40 + 32 + 1);
}

TEST(Metrics, TotalModelIsSumOfParts) {
  testing::Gen g(2);
  for (int i = 0; i < 200; ++i) {
    const unsigned k = 2 * static_cast<unsigned>(g.range(1, 4));
    const std::size_t n_o = g.range(8, 512);
    const auto c = SystemConfig::make(k, n_o, g.range(1, n_o));
    const auto n_f = g.range(1, 1000);
    const double h = g.unit() * 1000, swaps = g.unit() * 50, forest = g.unit() * 1e6;
    EXPECT_NEAR(tcr_model(c, n_f, h, swaps, forest),
                ucr_model(c) + ccr_model(c, n_f, h, swaps, forest), 1e-12);
  }
}

TEST(Metrics, ReportAddsComponents) {
  CompressionComponents comp;
  comp.files = 3;
  comp.original_bits = 3 * 8 * 256;
  comp.client_store_bits = 3 * 256;
  comp.forest_bits = 1000;
  comp.addendum_bits = 300;
  comp.change_bits = 200;
  comp.changed_value_bits = 100;
  comp.cloud_id_bits = 192;
  comp.pointer_bits = 192;
  comp.swaps = 6;
  const auto r = compression_report(SystemConfig::make(8, 256, 241), comp, 100);
  const double orig = 3 * 8 * 256;
  EXPECT_DOUBLE_EQ(r.ucr_measured, 768 / orig);
  EXPECT_DOUBLE_EQ(r.ccr_measured, 1984 / orig);
  EXPECT_DOUBLE_EQ(r.tcr_measured, (768 + 1984) / orig);
  EXPECT_DOUBLE_EQ(r.mean_swaps, 2.0);
  EXPECT_GT(r.tcr_model, 0);
  EXPECT_THROW(compression_report(SystemConfig::make(8, 256, 241), CompressionComponents{}, 0),
               Error);
}

TEST(Metrics, ExpansionIsReportedAsAboveOne) {
  // Nothing removed and the model's worst-case terms: the ratio exceeds 1.
  const auto c = SystemConfig::make(8, 256, 256);
  EXPECT_GT(ccr_model(c, 1, 8.0 * 256, 255, 0) + ucr_model(c), 1.0);
}

TEST(Metrics, ModelTracksMeasurementOnRandomData) {
  testing::Gen g(11);
  const auto corpus = g.symbols(256 * 1500, 8);
  const auto c = SystemConfig::make(8, 256, 241);
  const auto run = run_compression(corpus, c, EngineOptions{}, 3, false);
  const auto& r = run.report;
  EXPECT_EQ(r.components.files, 1500u);
  EXPECT_NEAR(r.ccr_model / r.ccr_measured, 1.0, 0.25)
      << "model " << r.ccr_model << " measured " << r.ccr_measured;
  // The client store is exactly the serialized deviation records.
  EXPECT_EQ(r.components.client_store_bits, 1500u * 8 * encoded_deviation_size(15, 8));
}

TEST(Metrics, CsvRowMatchesHeader) {
  CompressionComponents comp;
  comp.files = 1;
  comp.original_bits = 2048;
  const auto c = SystemConfig::make(8, 256, 241);
  const auto row = csv_row(c, compression_report(c, comp, 0));
  const auto header = csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}

}  // namespace
}  // namespace bonsai

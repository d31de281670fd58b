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

#include "bonsai/metrics.hpp"

#include <sstream>

#include "bonsai/bits.hpp"
#include "bonsai/error.hpp"

namespace bonsai {
namespace {

double original_bits(const SystemConfig& c, std::uint64_t n_f) {
  return static_cast<double>(n_f) * c.k * static_cast<double>(c.n_o);
}

}  // namespace

double ucr_model(const SystemConfig& c) {
  const double num = c.seed_bits + static_cast<double>(c.n_del()) * c.k + c.fid_bits + 1;
  return num / (static_cast<double>(c.k) * static_cast<double>(c.n_o));
}

double ccr_model(const SystemConfig& c, std::uint64_t n_f, double entropy_bits,
                 double mean_swaps, double forest_bits) {
  if (n_f == 0) fail(ErrorKind::kParameter, "compression ratio over zero files");
  const double per_record = entropy_bits + 3.0 * static_cast<double>(c.n_o) +
                            mean_swaps * ceil_log2(c.n_b) + c.fid_bits + c.pointer_bits;
  return (forest_bits + static_cast<double>(n_f) * per_record) / original_bits(c, n_f);
}

std::uint64_t tcr_constant(const SystemConfig& c) {
  return std::uint64_t{c.seed_bits} + c.pointer_bits + 2ull * c.fid_bits + 1;
}

double tcr_model(const SystemConfig& c, std::uint64_t n_f, double entropy_bits,
                 double mean_swaps, double forest_bits) {
  if (n_f == 0) fail(ErrorKind::kParameter, "compression ratio over zero files");
  const double per_record = static_cast<double>(tcr_constant(c)) + entropy_bits +
                            static_cast<double>(c.n_del()) * c.k +
                            3.0 * static_cast<double>(c.n_o) + mean_swaps * ceil_log2(c.n_b);
  return (forest_bits + static_cast<double>(n_f) * per_record) / original_bits(c, n_f);
}

CompressionReport compression_report(const SystemConfig& c, const CompressionComponents& comp,
                                     double entropy_bits) {
  if (comp.files == 0) fail(ErrorKind::kParameter, "compression report over zero files");
  CompressionReport r;
  r.components = comp;
  r.addendum_entropy_bits = entropy_bits;
  r.mean_swaps = static_cast<double>(comp.swaps) / static_cast<double>(comp.files);
  const double orig = static_cast<double>(comp.original_bits);
  r.ucr_measured = static_cast<double>(comp.client_store_bits) / orig;
  r.ccr_measured = static_cast<double>(comp.cloud_bits()) / orig;
  r.tcr_measured = r.ucr_measured + r.ccr_measured;
  r.ucr_model = ucr_model(c);
  r.ccr_model = ccr_model(c, comp.files, entropy_bits, r.mean_swaps,
                          static_cast<double>(comp.forest_bits));
  r.tcr_model = tcr_model(c, comp.files, entropy_bits, r.mean_swaps,
                          static_cast<double>(comp.forest_bits));
  return r;
}

std::string csv_header() {
  return "k,n_o,n_b,n_del,t,zones,files,original_bits,"
         "deleted_value_bits,seed_bits,invert_bits,client_id_bits,client_store_bits,"
         "forest_bits,addendum_bits,change_bits,changed_value_bits,cloud_id_bits,pointer_bits,"
         "swaps,mean_swaps,entropy_bits,"
         "ucr_measured,ucr_model,ccr_measured,ccr_model,tcr_measured,tcr_model";
}

std::string csv_row(const SystemConfig& c, const CompressionReport& r) {
  const auto& p = r.components;
  std::ostringstream out;
  out.precision(10);
  out << c.k << ',' << c.n_o << ',' << c.n_b << ',' << c.n_del() << ',' << c.t << ','
      << (c.zones_enabled ? 1 : 0) << ',' << p.files << ',' << p.original_bits << ','
      << p.deleted_value_bits << ',' << p.seed_bits << ',' << p.invert_bits << ','
      << p.client_id_bits << ',' << p.client_store_bits << ',' << p.forest_bits << ','
      << p.addendum_bits << ',' << p.change_bits << ',' << p.changed_value_bits << ','
      << p.cloud_id_bits << ',' << p.pointer_bits << ',' << p.swaps << ',' << r.mean_swaps
      << ',' << r.addendum_entropy_bits << ',' << r.ucr_measured << ',' << r.ucr_model << ','
      << r.ccr_measured << ',' << r.ccr_model << ',' << r.tcr_measured << ',' << r.tcr_model;
  return out.str();
}

}  // namespace bonsai

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

#include "bonsai/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "bonsai/client_transform.hpp"
#include "bonsai/error.hpp"
#include "bonsai/privacy.hpp"
#include "bonsai/prng.hpp"

namespace bonsai {

double addendum_entropy_bits(const BracketTable& table, std::size_t n_b) {
  double h = 0;
  const double total = static_cast<double>(table.total_weight());
  for (auto w : table.row_weights()) {
    if (w == 0) continue;
    const double p = static_cast<double>(w) / total;
    h -= p * std::log2(p);
  }
  return h * static_cast<double>(n_b);
}

RunResult run_compression(std::span<const Symbol> corpus, const SystemConfig& config,
                          EngineOptions options, std::uint64_t seed, bool verify) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  CloudEngine engine(config, options);
  SplitMix64 rng(seed);
  CompressionComponents comp;
  Policy policy = engine.policy();
  const std::size_t files = corpus.size() / config.n_o;
  for (std::size_t i = 0; i < files; ++i) {
    const auto chunk = corpus.subspan(i * config.n_o, config.n_o);
    const auto seeds = draw_seeds(config.t, rng);
    const FileId id{i};
    const auto tr = transform(chunk, policy, seeds, config, id);
    engine.dedup(id, tr.outsource);
    comp.client_store_bits += 8 * encoded_deviation_size(tr.deviation.deleted_values.size(), config.k);
    if (verify) {
      const auto back = reconstruct(engine.decompress(id), tr.deviation, config);
      if (!std::equal(back.begin(), back.end(), chunk.begin(), chunk.end())) {
        fail(ErrorKind::kInternal, "round trip failed for chunk " + std::to_string(i));
      }
    }
    if (options.refresh_every != 0 && (i + 1) % options.refresh_every == 0) {
      policy = engine.policy();
    }
  }
  if (files == 0) fail(ErrorKind::kParameter, "corpus holds no full chunk");

  const EngineStats stats = engine.stats();
  comp.files = files;
  comp.original_bits = files * config.k * config.n_o;
  comp.deleted_value_bits = files * config.n_del() * config.k;
  comp.seed_bits = files * config.seed_bits;
  comp.invert_bits = files;
  comp.client_id_bits = files * config.fid_bits;
  comp.forest_bits = stats.forest_bits;
  comp.addendum_bits = stats.addendum_bits;
  comp.change_bits = stats.change_bits;
  comp.changed_value_bits = stats.changed_value_bits;
  comp.cloud_id_bits = stats.id_bits;
  comp.pointer_bits = stats.pointer_bits;
  comp.swaps = stats.swaps;

  const BracketTable& table = engine.table(engine.policy().version);
  RunResult r;
  r.config = config;
  r.stats = stats;
  r.report = compression_report(config, comp, addendum_entropy_bits(table, config.n_b));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<RunResult> sweep_n_del(std::span<const Symbol> corpus, SystemConfig base,
                                   std::span<const std::size_t> n_del_values,
                                   EngineOptions options, std::uint64_t seed) {
  std::vector<RunResult> out;
  for (std::size_t n_del : n_del_values) {
    if (n_del >= base.n_o) fail(ErrorKind::kParameter, "n_del must be below n_o");
    SystemConfig c = base;
    c.n_b = base.n_o - n_del;
    out.push_back(run_compression(corpus, c, options, seed));
  }
  return out;
}

std::string privacy_grid_csv(std::size_t n_o, unsigned k, std::size_t max_n_del,
                             bool include_strong, std::uint64_t seed) {
  std::ostringstream out;
  out.precision(12);
  out << "adversary,prng_broken,n_o,n_b,k,m_log2,uncertainty_bits,leakage\n";
  SplitMix64 rng(seed);
  auto row = [&](const char* who, bool broken, std::size_t n_b, const PrivacyReport& r) {
    out << who << ',' << (broken ? 1 : 0) << ',' << n_o << ',' << n_b << ',' << k << ','
        << log2_big(r.m) << ',' << r.uncertainty_bits << ',' << r.leakage << '\n';
  };
  for (std::size_t n_del = 0; n_del <= max_n_del && n_del < n_o; ++n_del) {
    const std::size_t n_b = n_o - n_del;
    for (bool broken : {true, false}) row("weak", broken, n_b, weak_report(n_o, n_b, k, broken));
    if (!include_strong) continue;
    SymbolString f(n_o);
    for (auto& s : f) s = static_cast<Symbol>(rng() >> (64 - k));
    const auto pos = deletion_positions(Seed{rng()}, n_o, n_del);
    const auto o = delete_at(f, pos).remaining;
    const Prior prior = Prior::uniform(k);
    for (bool broken : {true, false}) {
      try {
        const auto r = broken ? strong_report(o, prior, n_o, k, std::span<const std::size_t>(pos))
                              : strong_report(o, prior, n_o, k);
        row("strong", broken, n_b, r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kCapacity) throw;
      }
    }
  }
  return out.str();
}

std::string rank_curve_csv(const SystemConfig& config, std::size_t trials, bool prng_broken,
                           std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Chunk> chunks(trials, Chunk(config.n_o));
  for (auto& c : chunks) {
    for (auto& s : c) s = static_cast<Symbol>(rng() >> (64 - config.k));
  }
  std::vector<std::size_t> grid;
  const BigInt m = prng_broken ? BigInt(1) << (config.k * config.n_del())
                               : preimage_count_weak(config.n_o, config.n_b, config.k);
  if (m > kMaxCandidates) fail(ErrorKind::kCapacity, "rank experiment needs at most 2^24 candidates");
  const auto total = m.convert_to<std::size_t>();
  for (std::size_t g = 1; g < total; g *= 2) grid.push_back(g);
  grid.push_back(total);
  const auto curve = rank_experiment(chunks, Prior::uniform(config.k), grid, config, prng_broken, rng());
  std::ostringstream out;
  out.precision(12);
  out << "g,hit_fraction,candidates,trials\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << grid[i] << ',' << curve.hit_fraction[i] << ',' << total << ',' << trials << '\n';
  }
  return out.str();
}

}  // namespace bonsai

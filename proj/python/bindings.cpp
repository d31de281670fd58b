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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "bonsai/client_transform.hpp"
#include "bonsai/cloud_engine.hpp"
#include "bonsai/error.hpp"
#include "bonsai/huffman.hpp"
#include "bonsai/metrics.hpp"
#include "bonsai/privacy.hpp"
#include "bonsai/prng.hpp"

namespace py = pybind11;
using namespace bonsai;

namespace {

// Arbitrary-precision counts cross over as Python ints.
py::int_ to_py(const BigInt& v) {
  std::ostringstream s;
  s << v;
  return py::int_(py::str(s.str()));
}

std::vector<std::uint64_t> to_u64(const std::vector<Seed>& seeds) {
  std::vector<std::uint64_t> out;
  for (const auto& s : seeds) out.push_back(s.value);
  return out;
}

py::dict stats_dict(const EngineStats& s) {
  py::dict d;
  d["records"] = s.records;
  d["bases"] = s.bases;
  d["forest_nodes"] = s.forest_nodes;
  d["forest_bits"] = s.forest_bits;
  d["addendum_bits"] = s.addendum_bits;
  d["change_bits"] = s.change_bits;
  d["changed_value_bits"] = s.changed_value_bits;
  d["swaps"] = s.swaps;
  d["id_bits"] = s.id_bits;
  d["pointer_bits"] = s.pointer_bits;
  d["table_versions"] = s.table_versions;
  d["total_bits"] = s.total_bits();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dual-deduplication engine: client transform, cloud engine and privacy analysis.";

  static py::exception<Error> error(m, "BonsaiError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init(&SystemConfig::make), py::arg("k") = 8, py::arg("n_o") = 256,
           py::arg("n_b") = 241, py::arg("t") = 4)
      .def_readwrite("k", &SystemConfig::k)
      .def_readwrite("n_o", &SystemConfig::n_o)
      .def_readwrite("n_b", &SystemConfig::n_b)
      .def_readwrite("t", &SystemConfig::t)
      .def_readwrite("seed_bits", &SystemConfig::seed_bits)
      .def_readwrite("fid_bits", &SystemConfig::fid_bits)
      .def_readwrite("pointer_bits", &SystemConfig::pointer_bits)
      .def_readwrite("zones_enabled", &SystemConfig::zones_enabled)
      .def_property_readonly("n_del", &SystemConfig::n_del)
      .def("validate", &SystemConfig::validate)
      .def("__repr__", [](const SystemConfig& c) {
        std::ostringstream s;
        s << "SystemConfig(k=" << c.k << ", n_o=" << c.n_o << ", n_b=" << c.n_b << ", t=" << c.t
          << ", zones=" << (c.zones_enabled ? "on" : "off") << ")";
        return s.str();
      });

  py::class_<Policy>(m, "Policy")
      .def_property_readonly("weights", [](const Policy& p) { return p.distribution.weights(); })
      .def_property_readonly("probabilities",
                             [](const Policy& p) { return p.distribution.probabilities(); })
      .def_readonly("n_b", &Policy::n_b)
      .def_readonly("version", &Policy::version);

  m.def(
      "uniform_policy",
      [](const SystemConfig& c) {
        return Policy{SymbolDistribution::uniform(c.alphabet_size()), c.n_b, 0};
      },
      py::arg("config"));

  py::class_<ClientDeviation>(m, "Deviation")
      .def_property_readonly("file_id", [](const ClientDeviation& d) { return d.file_id.value; })
      .def_property_readonly("seed", [](const ClientDeviation& d) { return d.seed.value; })
      .def_readonly("inverted", &ClientDeviation::inverted)
      .def_readonly("deleted_values", &ClientDeviation::deleted_values)
      .def(
          "to_bytes",
          [](const ClientDeviation& d, unsigned k) {
            const auto b = encode_deviation(d, k);
            return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
          },
          py::arg("k"))
      .def_static(
          "from_bytes",
          [](const py::bytes& data, unsigned k) {
            const std::string s = data;
            return decode_deviation(
                std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()), k);
          },
          py::arg("data"), py::arg("k"));

  m.def(
      "transform",
      [](const SymbolString& chunk, const Policy& policy, const SystemConfig& config,
         std::uint64_t file_id, std::uint64_t rng_seed) {
        SplitMix64 rng(rng_seed);
        const auto seeds = draw_seeds(config.t, rng);
        auto r = transform(chunk, policy, seeds, config, FileId{file_id});
        return py::make_tuple(r.outsource, r.deviation);
      },
      py::arg("chunk"), py::arg("policy"), py::arg("config"), py::arg("file_id"),
      py::arg("rng_seed"),
      "Deletes n_del symbols with the best of t seeded candidates. Returns (outsource, deviation).");
  m.def(
      "reconstruct",
      [](const SymbolString& outsource, const ClientDeviation& deviation, const SystemConfig& config) {
        return reconstruct(outsource, deviation, config);
      },
      py::arg("outsource"), py::arg("deviation"), py::arg("config"));
  m.def(
      "deletion_positions",
      [](std::uint64_t seed, std::size_t n_o, std::size_t count) {
        return deletion_positions(Seed{seed}, n_o, count);
      },
      py::arg("seed"), py::arg("n_o"), py::arg("count"));
  m.def(
      "draw_seeds",
      [](std::size_t t, std::uint64_t rng_seed) {
        SplitMix64 rng(rng_seed);
        return to_u64(draw_seeds(t, rng));
      },
      py::arg("t"), py::arg("rng_seed"));
  m.def(
      "huffman_codes",
      [](const std::vector<std::uint64_t>& weights) {
        std::vector<std::string> out;
        for (const auto& c : huffman(std::span<const std::uint64_t>(weights))) out.push_back(c.to_string());
        return out;
      },
      py::arg("weights"));

  py::class_<CloudEngine>(m, "CloudEngine")
      .def(py::init([](const SystemConfig& c, std::uint64_t refresh_every) {
             return std::make_unique<CloudEngine>(c, EngineOptions{refresh_every});
           }),
           py::arg("config"), py::arg("refresh_every") = 10000)
      .def_property_readonly("config", &CloudEngine::config)
      .def("setup", &CloudEngine::setup)
      .def("policy", &CloudEngine::policy)
      .def("policy_counts", &CloudEngine::policy_counts)
      .def(
          "dedup",
          [](CloudEngine& e, std::uint64_t id, const SymbolString& outsource) {
            const auto r = e.dedup(FileId{id}, outsource);
            py::dict d;
            d["file_id"] = r.file_id.value;
            d["table_version"] = r.table_version;
            d["base_pointer"] = r.base_pointer.value;
            d["addendum_bits"] = r.addendum.size();
            d["changed_value_bits"] = r.changed_values.size();
            d["swaps"] = r.change.positions.size();
            return d;
          },
          py::arg("file_id"), py::arg("outsource"))
      .def(
          "decompress", [](const CloudEngine& e, std::uint64_t id) { return e.decompress(FileId{id}); },
          py::arg("file_id"))
      .def(
          "contains", [](const CloudEngine& e, std::uint64_t id) { return e.contains(FileId{id}); },
          py::arg("file_id"))
      .def("__len__", &CloudEngine::record_count)
      .def("stats", [](const CloudEngine& e) { return stats_dict(e.stats()); })
      .def("save", &CloudEngine::save, py::arg("directory"))
      .def_static(
          "load",
          [](const std::filesystem::path& dir, std::uint64_t refresh_every) {
            return CloudEngine::load(dir, EngineOptions{refresh_every});
          },
          py::arg("directory"), py::arg("refresh_every") = 10000);

  m.def("ucr_model", &ucr_model, py::arg("config"));
  m.def("ccr_model", &ccr_model, py::arg("config"), py::arg("n_f"), py::arg("entropy_bits"),
        py::arg("mean_swaps"), py::arg("forest_bits"));
  m.def("tcr_model", &tcr_model, py::arg("config"), py::arg("n_f"), py::arg("entropy_bits"),
        py::arg("mean_swaps"), py::arg("forest_bits"));
  m.def("tcr_constant", &tcr_constant, py::arg("config"));

  m.def(
      "preimage_count",
      [](std::size_t n_o, std::size_t n_b, unsigned k) { return to_py(preimage_count_weak(n_o, n_b, k)); },
      py::arg("n_o"), py::arg("n_b"), py::arg("k"));
  m.def(
      "count_embeddings",
      [](const SymbolString& f, const SymbolString& o) { return to_py(count_embeddings(f, o)); },
      py::arg("f"), py::arg("o"));
  m.def(
      "weak_report",
      [](std::size_t n_o, std::size_t n_b, unsigned k, bool prng_broken) {
        const auto r = weak_report(n_o, n_b, k, prng_broken);
        py::dict d;
        d["preimages"] = to_py(r.m);
        d["uncertainty_bits"] = r.uncertainty_bits;
        d["leakage"] = r.leakage;
        return d;
      },
      py::arg("n_o"), py::arg("n_b"), py::arg("k"), py::arg("prng_broken"));
  m.def(
      "posterior",
      [](const SymbolString& o, std::size_t n_o, unsigned k,
         std::optional<std::vector<std::size_t>> known_positions) {
        const auto prior = Prior::uniform(k);
        const auto post = known_positions
                              ? strong_posterior(o, prior, n_o, k, std::span<const std::size_t>(*known_positions))
                              : strong_posterior(o, prior, n_o, k);
        std::vector<std::pair<SymbolString, double>> out;
        for (std::size_t i = 0; i < post.candidates.size(); ++i) {
          out.emplace_back(unpack_candidate(post.candidates[i], n_o, k),
                           static_cast<double>(post.probabilities[i]));
        }
        return out;
      },
      py::arg("outsource"), py::arg("n_o"), py::arg("k"), py::arg("known_positions") = py::none(),
      "Posterior over original chunks under a uniform prior, as (candidate, probability) pairs.");
}

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

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bonsai/cloud_engine.hpp"
#include "bonsai/corpus.hpp"
#include "bonsai/experiment.hpp"
#include "bonsai/file_client.hpp"
#include "bonsai/net.hpp"

namespace fs = std::filesystem;
using namespace bonsai;

namespace {

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kUsage = 2,
  kUnreachable = 3,
  kMissingStore = 4,
  kManifestMismatch = 5,
  kServer = 6,
};

struct ConfigFlags {
  unsigned k = 8;
  std::size_t n_o = 256;
  std::size_t n_b = 241;
  std::size_t t = 4;
  std::string zones = "auto";

  void add(CLI::App* app, bool with_n_b) {
    app->add_option("--k", k, "Bits per symbol")->check(CLI::IsMember({2, 4, 6, 8}));
    app->add_option("--n-o", n_o, "Symbols per chunk")->check(CLI::PositiveNumber);
    if (with_n_b) app->add_option("--n-b", n_b, "Symbols per outsource")->check(CLI::PositiveNumber);
    app->add_option("--seeds", t, "Candidate seeds per chunk")->check(CLI::PositiveNumber);
    app->add_option("--zones", zones, "Value zones: on, off or auto (on for k >= 4)")
        ->check(CLI::IsMember({"on", "off", "auto"}));
  }

  SystemConfig config() const {
    SystemConfig c = SystemConfig::make(k, n_o, std::min(n_b, n_o), t);
    if (zones != "auto") c.zones_enabled = zones == "on";
    c.validate();
    return c;
  }
};

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::trunc);
  if (!out) fail(ErrorKind::kNotFound, "cannot write " + *path);
  out << text;
}

int cmd_serve(const ConfigFlags& flags, const std::optional<std::string>& addr,
              const std::optional<std::string>& data_dir, std::uint64_t refresh) {
  // Block the shutdown signals before any thread starts so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  EngineOptions options{refresh};
  std::unique_ptr<CloudEngine> engine;
  if (data_dir && fs::exists(fs::path(*data_dir) / "policies.bin")) {
    engine = CloudEngine::load(*data_dir, options);
    std::cerr << "loaded " << engine->record_count() << " records from " << *data_dir << "\n";
  } else {
    engine = std::make_unique<CloudEngine>(flags.config(), options);
  }
  Server server(*engine, resolve_address(addr));
  server.start();
  const auto& c = engine->config();
  std::cout << "listening on port " << server.port() << " (k=" << c.k << " n_b=" << c.n_b
            << " zones=" << (c.zones_enabled ? "on" : "off") << ")" << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  if (data_dir) engine->save(*data_dir);
  return kOk;
}

int cmd_upload(const ConfigFlags& flags, const std::optional<std::string>& addr,
               const std::string& file, const std::string& store, std::uint64_t seed) {
  RemoteClient client(resolve_address(addr));
  SystemConfig config = flags.config();
  const auto summary = upload_file(client, file, config, store, UploadOptions{seed});
  std::cout << summary.manifest_path.string() << "\n";
  std::cerr << summary.manifest.chunks.size() << " chunks, deviation store "
            << summary.store_bytes << " bytes\n";
  return kOk;
}

int cmd_get(const std::optional<std::string>& addr, const std::string& manifest_path,
            std::optional<std::string> store, const std::string& out) {
  const Manifest manifest = read_manifest(manifest_path);
  const fs::path store_dir = store ? fs::path(*store) : fs::path(manifest_path).parent_path();
  RemoteClient client(resolve_address(addr));
  const auto bytes = retrieve_file(client, manifest, store_dir);
  if (bytes.size() != manifest.byte_length) throw ManifestError("reassembled length differs from manifest");
  write_bytes(out, bytes);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bonsai dual-deduplication storage: server, client and experiments"};
  app.require_subcommand(1);
  std::optional<std::string> addr;

  ConfigFlags serve_flags;
  std::optional<std::string> data_dir;
  std::uint64_t refresh = 10000;
  auto* serve = app.add_subcommand("serve", "Run the cloud server");
  serve->add_option("--addr", addr, "Listen address host:port (env BONSAI_ADDR)");
  serve_flags.add(serve, true);
  serve->add_option("--data", data_dir, "Directory to load state from and save it to on exit");
  serve->add_option("--refresh", refresh, "Uploads between policy refreshes, 0 for never");

  ConfigFlags up_flags;
  std::string up_file, up_store = "bonsai-store";
  std::uint64_t up_seed = 0;
  auto* upload = app.add_subcommand("upload", "Chunk, transform and upload a file");
  upload->add_option("file", up_file, "File to upload")->required()->check(CLI::ExistingFile);
  upload->add_option("--addr", addr, "Server address host:port (env BONSAI_ADDR)");
  up_flags.add(upload, false);
  upload->add_option("--store", up_store, "Directory for the manifest and deviation store");
  upload->add_option("--rng-seed", up_seed, "Seed for the client RNG (0 = random)");

  std::string get_manifest, get_out;
  std::optional<std::string> get_store;
  auto* get = app.add_subcommand("get", "Retrieve and reassemble a file");
  get->add_option("manifest", get_manifest, "Manifest written by upload")->required();
  get->add_option("--addr", addr, "Server address host:port (env BONSAI_ADDR)");
  get->add_option("--store", get_store, "Deviation store directory (default: manifest's)");
  get->add_option("-o,--out", get_out, "Output path")->required();

  auto* experiment = app.add_subcommand("experiment", "Run a sweep and emit CSV");
  experiment->require_subcommand(1);
  std::optional<std::string> csv;
  ConfigFlags ex_flags;
  double mib = 16, decay = 0.5;
  std::uint64_t ex_seed = 1;
  std::size_t max_n_del = 19, trials = 10000;
  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--csv", csv, "Write CSV here instead of stdout");
    sub->add_option("--mib", mib, "Synthetic corpus size in MiB")->check(CLI::PositiveNumber);
    sub->add_option("--decay", decay, "Markov successor decay in (0, 1]");
    sub->add_option("--rng-seed", ex_seed, "Corpus and client seed");
  };
  auto* ndel = experiment->add_subcommand("ndel", "Compression versus n_del = 1..max");
  ex_flags.add(ndel, false);
  add_corpus(ndel);
  ndel->add_option("--max-n-del", max_n_del, "Largest n_del");
  auto* kexp = experiment->add_subcommand("k", "Compression for k = 4 and 8 at fixed n_del");
  add_corpus(kexp);
  std::size_t k_n_del = 15;
  kexp->add_option("--n-del", k_n_del, "Deleted symbols per chunk");
  auto* priv = experiment->add_subcommand("privacy", "Weak and strong uncertainty grid");
  std::size_t priv_n_o = 8;
  unsigned priv_k = 2;
  priv->add_option("--csv", csv, "Write CSV here instead of stdout");
  priv->add_option("--n-o", priv_n_o, "Chunk length");
  priv->add_option("--k", priv_k, "Bits per symbol");
  priv->add_option("--max-n-del", max_n_del, "Largest n_del");
  priv->add_option("--rng-seed", ex_seed, "Sampling seed");
  bool strong = true;
  priv->add_flag("--strong,!--weak-only", strong, "Include toy-scale strong adversary rows");
  auto* rank = experiment->add_subcommand("rank", "Top-g guess rate at toy scale");
  ConfigFlags rank_flags;
  rank_flags.k = 2;
  rank_flags.n_o = 8;
  rank_flags.n_b = 2;
  rank_flags.t = 1;
  rank->add_option("--csv", csv, "Write CSV here instead of stdout");
  rank_flags.add(rank, true);
  rank->add_option("--trials", trials, "Chunks to rank");
  rank->add_option("--rng-seed", ex_seed, "Sampling seed");
  bool rank_unbroken = false;
  rank->add_flag("--prng-intact", rank_unbroken, "Adversary does not know the deletion positions");

  std::string corpus_out;
  MarkovCorpusOptions corpus_opts;
  double corpus_mib = 16;
  auto* corpus = app.add_subcommand("corpus", "Write a synthetic Markov corpus");
  corpus->add_option("-o,--out", corpus_out, "Output file")->required();
  corpus->add_option("--mib", corpus_mib, "Size in MiB")->check(CLI::PositiveNumber);
  corpus->add_option("--decay", corpus_opts.decay, "Markov successor decay in (0, 1]");
  corpus->add_option("--rng-seed", corpus_opts.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) return cmd_serve(serve_flags, addr, data_dir, refresh);
    if (*upload) return cmd_upload(up_flags, addr, up_file, up_store, up_seed);
    if (*get) return cmd_get(addr, get_manifest, get_store, get_out);
    if (*corpus) {
      const auto symbols = markov_corpus(static_cast<std::size_t>(corpus_mib * 1048576), corpus_opts);
      write_bytes(corpus_out, symbols);
      return kOk;
    }
    if (*ndel || *kexp) {
      std::ostringstream out;
      out << csv_header() << "\n";
      const auto bytes = static_cast<std::size_t>(mib * 1048576);
      if (*ndel) {
        const SystemConfig base = ex_flags.config();
        MarkovCorpusOptions opts{base.k, decay, ex_seed};
        const auto corpus_symbols = markov_corpus(bytes * 8 / base.k, opts);
        std::vector<std::size_t> values;
        for (std::size_t d = 1; d <= max_n_del; ++d) values.push_back(d);
        for (const auto& r : sweep_n_del(corpus_symbols, base, values, {}, ex_seed)) {
          out << csv_row(r.config, r.report) << "\n";
        }
      } else {
        for (unsigned k : {4u, 8u}) {
          const SystemConfig c = SystemConfig::make(k, 256, 256 - k_n_del);
          const auto corpus_symbols = markov_corpus(bytes * 8 / k, {k, decay, ex_seed});
          out << csv_row(c, run_compression(corpus_symbols, c, {}, ex_seed).report) << "\n";
        }
      }
      write_text(csv, out.str());
      return kOk;
    }
    if (*priv) {
      write_text(csv, privacy_grid_csv(priv_n_o, priv_k, max_n_del, strong, ex_seed));
      return kOk;
    }
    if (*rank) {
      write_text(csv, rank_curve_csv(rank_flags.config(), trials, !rank_unbroken, ex_seed));
      return kOk;
    }
  } catch (const ConnectError& e) {
    std::cerr << "bonsai: " << e.what() << "\n";
    return kUnreachable;
  } catch (const StoreError& e) {
    std::cerr << "bonsai: " << e.what() << "\n";
    return kMissingStore;
  } catch (const ManifestError& e) {
    std::cerr << "bonsai: " << e.what() << "\n";
    return kManifestMismatch;
  } catch (const Error& e) {
    std::cerr << "bonsai: " << e.what() << "\n";
    const bool server_side = e.kind() == ErrorKind::kProtocol || e.kind() == ErrorKind::kNotFound;
    return server_side ? kServer : kOther;
  } catch (const std::exception& e) {
    std::cerr << "bonsai: " << e.what() << "\n";
    return kOther;
  }
  return kUsage;
}

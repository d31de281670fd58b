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

#include "bonsai/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "bonsai/client_transform.hpp"
#include "bonsai/error.hpp"
#include "bonsai/prng.hpp"

namespace bonsai {
namespace {

BigInt binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  BigInt c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

BigInt power(std::uint64_t base, std::size_t exp) {
  BigInt r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_alphabet(std::span<const Symbol> s, std::size_t n, const char* what) {
  for (Symbol x : s) {
    if (x >= n) fail(ErrorKind::kRange, std::string(what) + " symbol outside the alphabet");
  }
}

std::vector<long double> normalised(const SymbolDistribution& d) {
  std::vector<long double> p(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    p[i] = static_cast<long double>(d.weight(i)) / static_cast<long double>(d.total());
  }
  return p;
}

double entropy_of(const std::vector<long double>& p) {
  long double h = 0;
  for (long double x : p) {
    if (x > 0) h -= x * std::log2(x);
  }
  return static_cast<double>(h);
}

}  // namespace

double log2_big(const BigInt& value) {
  if (value <= 0) fail(ErrorKind::kParameter, "log2 of a nonpositive integer");
  const std::size_t msb = boost::multiprecision::msb(value);
  if (msb < 53) return std::log2(value.convert_to<double>());
  // Keep the top 53 bits and add the shift back.
  const std::size_t shift = msb - 52;
  const BigInt top = value >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

BigInt preimage_count_weak(std::size_t n_o, std::size_t n_b, unsigned k) {
  if (n_b > n_o) fail(ErrorKind::kParameter, "need n_b <= n_o");
  if (k == 0 || k > 16) fail(ErrorKind::kParameter, "k must be in [1, 16]");
  const std::uint64_t other = (std::uint64_t{1} << k) - 1;
  BigInt m = 0;
  for (std::size_t j = 0; j <= n_o - n_b; ++j) {
    m += binomial(n_o, j + n_b) * power(other, n_o - n_b - j);
  }
  return m;
}

PrivacyReport weak_report(std::size_t n_o, std::size_t n_b, unsigned k, bool prng_broken) {
  if (n_o == 0) fail(ErrorKind::kParameter, "n_o must be positive");
  PrivacyReport r;
  r.adversary = Adversary::kWeak;
  r.prng_broken = prng_broken;
  const double total = static_cast<double>(k) * static_cast<double>(n_o);
  if (prng_broken) {
    if (n_b > n_o) fail(ErrorKind::kParameter, "need n_b <= n_o");
    r.m = power(2, static_cast<std::size_t>(k) * (n_o - n_b));
    r.uncertainty_bits = static_cast<double>(k) * static_cast<double>(n_o - n_b);
    // (k*n_o - k*(n_o-n_b)) / (k*n_o) reduces to n_b/n_o.
    r.leakage = static_cast<double>(n_b) / static_cast<double>(n_o);
  } else {
    r.m = preimage_count_weak(n_o, n_b, k);
    r.uncertainty_bits = log2_big(r.m);
    r.leakage = (total - r.uncertainty_bits) / total;
  }
  return r;
}

BigInt count_embeddings(std::span<const Symbol> f, std::span<const Symbol> o) {
  if (o.size() > f.size()) return 0;
  // row[j] = ways to embed o[0..j) in the prefix of f read so far.
  std::vector<BigInt> row(o.size() + 1, 0);
  row[0] = 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = std::min(o.size(), i + 1); j >= 1; --j) {
      if (f[i] == o[j - 1]) row[j] += row[j - 1];
    }
  }
  return row[o.size()];
}

Prior Prior::uniform(unsigned k) {
  if (k == 0 || k > 8) fail(ErrorKind::kParameter, "k must be in [1, 8]");
  Prior p;
  p.kind_ = Kind::kUniform;
  p.n_ = std::size_t{1} << k;
  return p;
}

Prior Prior::iid(SymbolDistribution symbols) {
  Prior p;
  p.kind_ = Kind::kIid;
  p.n_ = symbols.size();
  p.initial_ = normalised(symbols);
  return p;
}

Prior Prior::markov(SymbolDistribution initial, std::vector<SymbolDistribution> transitions) {
  if (transitions.size() != initial.size()) {
    fail(ErrorKind::kParameter, "Markov prior needs one transition row per symbol");
  }
  Prior p;
  p.kind_ = Kind::kMarkov;
  p.n_ = initial.size();
  p.initial_ = normalised(initial);
  for (const auto& row : transitions) {
    if (row.size() != p.n_) fail(ErrorKind::kParameter, "transition row has the wrong size");
    p.transitions_.push_back(normalised(row));
  }
  return p;
}

long double Prior::probability(std::span<const Symbol> f) const {
  check_alphabet(f, n_, "prior");
  long double prob = 1;
  switch (kind_) {
    case Kind::kUniform:
      for (std::size_t i = 0; i < f.size(); ++i) prob /= static_cast<long double>(n_);
      break;
    case Kind::kIid:
      for (Symbol s : f) prob *= initial_[s];
      break;
    case Kind::kMarkov:
      if (!f.empty()) prob = initial_[f[0]];
      for (std::size_t i = 1; i < f.size(); ++i) prob *= transitions_[f[i - 1]][f[i]];
      break;
  }
  return prob;
}

double Prior::entropy_bits(std::size_t length) const {
  switch (kind_) {
    case Kind::kUniform:
      return static_cast<double>(length) * std::log2(static_cast<double>(n_));
    case Kind::kIid:
      return static_cast<double>(length) * entropy_of(initial_);
    case Kind::kMarkov: {
      if (length == 0) return 0;
      // Chain rule: H(X1) + sum_t sum_a P(X_{t-1}=a) H(next | a).
      std::vector<double> row_entropy(n_);
      for (std::size_t a = 0; a < n_; ++a) row_entropy[a] = entropy_of(transitions_[a]);
      std::vector<long double> marginal = initial_;
      double h = entropy_of(initial_);
      for (std::size_t t = 1; t < length; ++t) {
        std::vector<long double> next(n_, 0);
        for (std::size_t a = 0; a < n_; ++a) {
          h += static_cast<double>(marginal[a]) * row_entropy[a];
          for (std::size_t b = 0; b < n_; ++b) next[b] += marginal[a] * transitions_[a][b];
        }
        marginal = std::move(next);
      }
      return h;
    }
  }
  return 0;
}

std::uint64_t pack_candidate(std::span<const Symbol> f, unsigned k) {
  if (static_cast<std::size_t>(k) * f.size() > 64) {
    fail(ErrorKind::kCapacity, "candidate does not fit 64 bits");
  }
  std::uint64_t v = 0;
  for (Symbol s : f) v = (v << k) | s;
  return v;
}

SymbolString unpack_candidate(std::uint64_t packed, std::size_t n_o, unsigned k) {
  if (static_cast<std::size_t>(k) * n_o > 64) {
    fail(ErrorKind::kCapacity, "candidate does not fit 64 bits");
  }
  SymbolString f(n_o);
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  for (std::size_t i = n_o; i-- > 0;) {
    f[i] = static_cast<Symbol>(packed & mask);
    packed >>= k;
  }
  return f;
}

double Posterior::entropy_bits() const {
  long double h = 0;
  for (long double p : probabilities) {
    if (p > 0) h -= p * std::log2(p);
  }
  return static_cast<double>(h);
}

Posterior::Standing Posterior::standing_of(std::uint64_t truth) const {
  Standing s;
  if (!std::binary_search(candidates.begin(), candidates.end(), truth)) return s;
  const auto at = std::lower_bound(candidates.begin(), candidates.end(), truth);
  const long double p_true = probabilities[static_cast<std::size_t>(at - candidates.begin())];
  for (const long double p : probabilities) {
    if (p > p_true) ++s.better;
    if (p == p_true) ++s.tied;
  }
  return s;
}

std::size_t Posterior::rank_of(std::uint64_t truth) const {
  auto it = std::lower_bound(candidates.begin(), candidates.end(), truth);
  if (it == candidates.end() || *it != truth) return 0;
  const long double p_true = probabilities[static_cast<std::size_t>(it - candidates.begin())];
  std::size_t rank = 1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const long double p = probabilities[i];
    if (p > p_true || (p == p_true && candidates[i] < truth)) ++rank;
  }
  return rank;
}

Posterior strong_posterior(std::span<const Symbol> o, const Prior& prior, std::size_t n_o,
                           unsigned k, std::optional<std::span<const std::size_t>> known_positions) {
  const std::size_t n = std::size_t{1} << k;
  if (prior.alphabet_size() != n) fail(ErrorKind::kParameter, "prior alphabet differs from 2^k");
  if (o.size() > n_o) fail(ErrorKind::kParameter, "outsource longer than n_o");
  check_alphabet(o, n, "outsource");
  if (static_cast<std::size_t>(k) * n_o > 64) {
    fail(ErrorKind::kCapacity, "enumeration needs k*n_o <= 64");
  }
  const std::size_t n_del = n_o - o.size();

  Posterior post;
  post.k = k;
  post.n_o = n_o;
  std::vector<long double> weight;
  SymbolString f(n_o);

  if (known_positions) {
    std::vector<std::size_t> pos(known_positions->begin(), known_positions->end());
    std::sort(pos.begin(), pos.end());
    if (pos.size() != n_del || std::adjacent_find(pos.begin(), pos.end()) != pos.end() ||
        (!pos.empty() && pos.back() >= n_o)) {
      fail(ErrorKind::kParameter, "known positions must be n_o - n_b distinct indices below n_o");
    }
    const BigInt count = power(n, n_del);
    if (count > kMaxCandidates) {
      fail(ErrorKind::kCapacity, "enumeration needs 2^" + std::to_string(k * n_del) +
                                     " candidates, limit is 2^24");
    }
    std::vector<bool> hole(n_o, false);
    for (auto p : pos) hole[p] = true;
    for (std::size_t i = 0, j = 0; i < n_o; ++i) {
      f[i] = hole[i] ? Symbol{0} : o[j++];
    }
    const std::size_t total = count.convert_to<std::size_t>();
    for (std::size_t c = 0; c < total; ++c) {
      // Counter over the holes, first hole most significant.
      std::size_t rest = c;
      for (std::size_t h = pos.size(); h-- > 0;) {
        f[pos[h]] = static_cast<Symbol>(rest % n);
        rest /= n;
      }
      post.candidates.push_back(pack_candidate(f, k));
      weight.push_back(prior.probability(f));
    }
  } else {
    const BigInt count = preimage_count_weak(n_o, o.size(), k);
    if (count > kMaxCandidates) {
      fail(ErrorKind::kCapacity, "enumeration needs 2^" + std::to_string(log2_big(count)) +
                                     " candidates, limit is 2^24");
    }
    post.candidates.reserve(count.convert_to<std::size_t>());
    // Each supersequence has exactly one greedy leftmost embedding of o, so
    // walking (position, matched) states visits every candidate once, in
    // lexicographic order.
    const std::size_t m = o.size();
    auto visit = [&](auto&& self, std::size_t i, std::size_t matched) -> void {
      if (n_o - i < m - matched) return;
      if (i == n_o) {
        post.candidates.push_back(pack_candidate(f, k));
        weight.push_back(static_cast<long double>(count_embeddings(f, o).convert_to<double>()) *
                         prior.probability(f));
        return;
      }
      for (std::size_t s = 0; s < n; ++s) {
        f[i] = static_cast<Symbol>(s);
        const bool hit = matched < m && o[matched] == s;
        self(self, i + 1, matched + (hit ? 1 : 0));
      }
    };
    visit(visit, 0, 0);
  }

  long double total = 0;
  for (long double w : weight) total += w;
  if (!(total > 0)) fail(ErrorKind::kParameter, "prior gives every candidate zero probability");
  post.probabilities.resize(weight.size());
  for (std::size_t i = 0; i < weight.size(); ++i) post.probabilities[i] = weight[i] / total;
  return post;
}

PrivacyReport strong_report(std::span<const Symbol> o, const Prior& prior, std::size_t n_o,
                            unsigned k, std::optional<std::span<const std::size_t>> known_positions) {
  const Posterior post = strong_posterior(o, prior, n_o, k, known_positions);
  PrivacyReport r;
  r.adversary = Adversary::kStrong;
  r.prng_broken = known_positions.has_value();
  r.m = post.candidates.size();
  r.uncertainty_bits = post.entropy_bits();
  const double h_f = prior.entropy_bits(n_o);
  r.leakage = h_f > 0 ? (h_f - r.uncertainty_bits) / h_f : 0.0;
  return r;
}

RankCurve rank_experiment(std::span<const Chunk> chunks, const Prior& prior,
                          std::span<const std::size_t> g_grid, const SystemConfig& config,
                          bool prng_broken, std::uint64_t rng_seed) {
  config.validate();
  RankCurve curve;
  curve.g.assign(g_grid.begin(), g_grid.end());
  const Policy policy{SymbolDistribution::uniform(config.alphabet_size()), config.n_b, 0};
  SplitMix64 rng(rng_seed);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const auto seeds = draw_seeds(config.t, rng);
    const auto tr = transform(chunks[c], policy, seeds, config, FileId{c});
    const Outsource o =
        tr.deviation.inverted ? invert(tr.outsource, config.k) : tr.outsource;
    Posterior post;
    if (prng_broken) {
      const auto pos = deletion_positions(tr.deviation.seed, config.n_o, config.n_del());
      post = strong_posterior(o, prior, config.n_o, config.k, std::span<const std::size_t>(pos));
    } else {
      post = strong_posterior(o, prior, config.n_o, config.k);
    }
    curve.candidates = post.candidates.size();
    const auto standing = post.standing_of(pack_candidate(chunks[c], config.k));
    if (standing.tied == 0) fail(ErrorKind::kInternal, "true chunk missing from its own posterior");
    // Exact ties are broken uniformly at random so that the client's seed
    // choice cannot bias the rank through candidate order.
    std::uniform_int_distribution<std::size_t> pick(0, standing.tied - 1);
    curve.ranks.push_back(standing.better + 1 + pick(rng));
  }
  for (std::size_t g : curve.g) {
    std::size_t hits = 0;
    for (auto r : curve.ranks) hits += r <= g ? 1 : 0;
    curve.hit_fraction.push_back(
        chunks.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(chunks.size()));
  }
  return curve;
}

}  // namespace bonsai

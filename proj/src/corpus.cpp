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

#include "bonsai/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bonsai/error.hpp"
#include "bonsai/prng.hpp"

namespace bonsai {
namespace {

struct Chain {
  std::size_t n = 0;
  std::vector<std::vector<double>> prob;  // prob[a][b]
};

Chain build_chain(const MarkovCorpusOptions& o) {
  if (o.k < 1 || o.k > 8) fail(ErrorKind::kParameter, "corpus k must be in [1, 8]");
  if (!(o.decay > 0 && o.decay <= 1)) fail(ErrorKind::kParameter, "decay must be in (0, 1]");
  Chain c;
  c.n = std::size_t{1} << o.k;
  SplitMix64 rng(o.seed);
  std::vector<std::size_t> rank(c.n);
  c.prob.assign(c.n, std::vector<double>(c.n));
  for (std::size_t a = 0; a < c.n; ++a) {
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    double w = 1, sum = 0;
    for (std::size_t j = 0; j < c.n; ++j, w *= o.decay) {
      c.prob[a][rank[j]] = w;
      sum += w;
    }
    for (auto& p : c.prob[a]) p /= sum;
  }
  return c;
}

}  // namespace

SymbolString markov_corpus(std::size_t symbols, const MarkovCorpusOptions& options) {
  const Chain c = build_chain(options);
  std::vector<std::vector<double>> cdf(c.n);
  for (std::size_t a = 0; a < c.n; ++a) {
    cdf[a].resize(c.n);
    std::partial_sum(c.prob[a].begin(), c.prob[a].end(), cdf[a].begin());
    cdf[a].back() = 1.0;
  }
  SplitMix64 rng(options.seed ^ 0x5DEECE66Dull);
  SymbolString out(symbols);
  std::size_t state = rng() % c.n;
  for (auto& s : out) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto& row = cdf[state];
    state = static_cast<std::size_t>(std::upper_bound(row.begin(), row.end(), u) - row.begin());
    if (state >= c.n) state = c.n - 1;
    s = static_cast<Symbol>(state);
  }
  return out;
}

double markov_entropy_rate(const MarkovCorpusOptions& options) {
  const Chain c = build_chain(options);
  // Stationary law by power iteration; the chain is dense so it mixes fast.
  std::vector<double> pi(c.n, 1.0 / static_cast<double>(c.n)), next(c.n);
  for (int it = 0; it < 1000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < c.n; ++a) {
      for (std::size_t b = 0; b < c.n; ++b) next[b] += pi[a] * c.prob[a][b];
    }
    pi.swap(next);
  }
  double h = 0;
  for (std::size_t a = 0; a < c.n; ++a) {
    for (double p : c.prob[a]) {
      if (p > 0) h -= pi[a] * p * std::log2(p);
    }
  }
  return h;
}

}  // namespace bonsai

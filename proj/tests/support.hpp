#pragma once

// Test-only models and oracles. Nothing here calls into the decoder or
// similarity code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "bidi/corpus.hpp"
#include "bidi/lm.hpp"

namespace bidi::testing {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Next-token distributions drawn from a hash of (seed, source, prefix):
// arbitrary but fixed, full support, and normalized by construction.
class RandomLM final : public LanguageModel {
 public:
  RandomLM(std::size_t V, std::uint64_t seed, Direction dir = Direction::regular, double eos_bias = 0.0,
           double temperature = 2.0)
      : V_(V), seed_(seed), dir_(dir), eos_bias_(eos_bias), temperature_(temperature) {}

  Direction direction() const override { return dir_; }
  std::size_t vocab_size() const override { return V_; }

  using LanguageModel::next_token_logprobs;
  void next_token_logprobs(std::span<const TokenId> source, std::span<const TokenId> prefix,
                           std::span<double> out) const override {
    std::uint64_t h = splitmix(seed_);
    for (auto t : source) h = splitmix(h ^ (t + 0x1000));
    h = splitmix(h ^ 0xabcdef);
    for (auto t : prefix) h = splitmix(h ^ (t + 0x2000));
    double maxv = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < V_; ++w) {
      const double u = static_cast<double>(splitmix(h + w) >> 11) * 0x1.0p-53;
      out[w] = temperature_ * u + (w == kEos ? eos_bias_ : 0.0);
      maxv = std::max(maxv, out[w]);
    }
    double z = 0.0;
    for (std::size_t w = 0; w < V_; ++w) z += std::exp(out[w] - maxv);
    const double logz = maxv + std::log(z);
    for (std::size_t w = 0; w < V_; ++w) out[w] -= logz;
  }

 private:
  std::size_t V_;
  std::uint64_t seed_;
  Direction dir_;
  double eos_bias_;
  double temperature_;
};

// Distribution supplied by a callback on the prefix; zero probabilities are
// allowed and map to -inf.
class ScriptedLM final : public LanguageModel {
 public:
  using Script = std::function<std::vector<double>(std::span<const TokenId> prefix)>;

  ScriptedLM(std::size_t V, Direction dir, Script script) : V_(V), dir_(dir), script_(std::move(script)) {}

  Direction direction() const override { return dir_; }
  std::size_t vocab_size() const override { return V_; }

  using LanguageModel::next_token_logprobs;
  void next_token_logprobs(std::span<const TokenId>, std::span<const TokenId> prefix,
                           std::span<double> out) const override {
    const auto p = script_(prefix);
    for (std::size_t w = 0; w < V_; ++w) out[w] = std::log(p[w]);
  }

 private:
  std::size_t V_;
  Direction dir_;
  Script script_;
};

// GNMT length normalization written out independently of the library.
inline double oracle_score(double logprob, std::size_t len, double alpha) {
  return logprob / std::pow((5.0 + static_cast<double>(len)) / 6.0, alpha);
}

struct OracleBest {
  TokenSeq tokens;
  double logprob = 0.0;
  double score = -std::numeric_limits<double>::infinity();
};

// Exhaustive search over every sequence the decoder may emit: EOS-terminated
// sequences of length <= T and EOS-free sequences of length exactly T.
// Ties go to the lexicographically smaller sequence.
inline OracleBest exhaustive_argmax(const LanguageModel& lm, const TokenSeq& source, std::size_t T, double alpha) {
  const std::size_t V = lm.vocab_size();
  OracleBest best;
  bool have = false;
  TokenSeq prefix;
  auto consider = [&](const TokenSeq& seq, double lp) {
    const double s = oracle_score(lp, seq.size(), alpha);
    if (!have || s > best.score || (s == best.score && seq < best.tokens)) {
      best = {seq, lp, s};
      have = true;
    }
  };
  std::function<void(double)> dfs = [&](double lp) {
    const auto dist = lm.next_token_logprobs(source, prefix);
    for (TokenId w = 0; w < V; ++w) {
      const double next = lp + dist[w];
      prefix.push_back(w);
      if (w == kEos || prefix.size() == T)
        consider(prefix, next);
      else
        dfs(next);
      prefix.pop_back();
    }
  };
  dfs(0.0);
  return best;
}

// ---------------------------------------------------------------------------
// Naive BLEU_T: n-grams as vectors, counted with linear scans.

inline std::size_t occurrences(const TokenSeq& seq, const TokenSeq& gram) {
  std::size_t c = 0;
  for (std::size_t i = 0; i + gram.size() <= seq.size(); ++i)
    if (std::equal(gram.begin(), gram.end(), seq.begin() + i)) ++c;
  return c;
}

inline double naive_bleu_t(const TokenSeq& hyp, const TokenSeq& ref, std::size_t T, std::size_t N) {
  std::vector<double> num(N), den(N);
  bool zero = false;
  for (std::size_t n = 1; n <= N; ++n) {
    std::vector<TokenSeq> seen;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
      TokenSeq g(hyp.begin() + i, hyp.begin() + i + n);
      den[n - 1] += 1;
      if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
      seen.push_back(g);
      num[n - 1] += static_cast<double>(std::min(occurrences(hyp, g), occurrences(ref, g)));
    }
    if (num[n - 1] == 0) zero = true;
  }
  if (num[0] == 0) return 0.0;
  double product = 1.0;
  for (std::size_t n = 1; n <= N; ++n) {
    double a = num[n - 1], b = den[n - 1];
    if (zero && n >= 2) {
      a += 1;
      b += 1;
    }
    product *= std::pow(a / b, 1.0 / static_cast<double>(N));
  }
  const double c = static_cast<double>(hyp.size());
  const double bp = hyp.size() >= T ? 1.0 : std::exp(1.0 - static_cast<double>(T) / c);
  return bp * product;
}

// ---------------------------------------------------------------------------
// Transportation oracles.

// Enumerates every basic solution (spanning trees of the bipartite support
// graph with m + n - 1 cells), keeps the feasible ones, returns the minimum
// cost. Exponential; intended for m, n <= 4.
inline double vertex_enumeration_cost(const std::vector<double>& supply, const std::vector<double>& demand,
                                      const std::vector<double>& cost) {
  const std::size_t m = supply.size(), n = demand.size(), cells = m * n, k = m + n - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(k);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      // Spanning tree check via union-find.
      std::vector<std::size_t> up(m + n);
      std::iota(up.begin(), up.end(), 0);
      std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
        return up[a] == a ? a : up[a] = find(up[a]);
      };
      for (auto c : pick) {
        const auto a = find(c / n), b = find(m + c % n);
        if (a == b) return;
        up[a] = b;
      }
      // Peel leaves: a node with one remaining cell fixes that cell's flow.
      std::vector<double> rs = supply, cs = demand;
      std::vector<char> done(k, 0);
      std::vector<double> flow(cells, 0.0);
      for (std::size_t round = 0; round < k; ++round) {
        bool progressed = false;
        for (std::size_t node = 0; node < m + n && !progressed; ++node) {
          std::size_t count = 0, which = 0;
          for (std::size_t t = 0; t < k; ++t) {
            if (done[t]) continue;
            const auto c = pick[t];
            if ((node < m && c / n == node) || (node >= m && c % n == node - m)) {
              ++count;
              which = t;
            }
          }
          if (count != 1) continue;
          const auto c = pick[which];
          const double x = node < m ? rs[node] : cs[node - m];
          flow[c] = x;
          rs[c / n] -= x;
          cs[c % n] -= x;
          done[which] = 1;
          progressed = true;
        }
        if (!progressed) return;
      }
      double total = 0.0;
      for (std::size_t c = 0; c < cells; ++c) {
        if (flow[c] < -1e-12) return;
        total += flow[c] * cost[c];
      }
      best = std::min(best, total);
      return;
    }
    for (std::size_t c = start; c + (k - depth) <= cells; ++c) {
      pick[depth] = c;
      choose(c + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

// Min-cost flow by successive shortest paths on integer units. Exact for
// integer supplies; returns total cost (not normalized).
inline double ssp_integer_cost(std::vector<long> supply, std::vector<long> demand, const std::vector<double>& cost) {
  const std::size_t m = supply.size(), n = demand.size();
  std::vector<long> flow(m * n, 0);
  double total = 0.0;
  for (;;) {
    long remaining = 0;
    for (auto s : supply) remaining += s;
    if (remaining == 0) break;
    // Bellman-Ford over nodes: rows 0..m-1, cols m..m+n-1. Forward arcs
    // row->col cost c, backward col->row cost -c when flow > 0.
    const std::size_t N = m + n;
    std::vector<double> dist(N, std::numeric_limits<double>::infinity());
    std::vector<long> prev(N, -1);
    for (std::size_t i = 0; i < m; ++i)
      if (supply[i] > 0) dist[i] = 0.0;
    for (std::size_t it = 0; it < N; ++it) {
      bool changed = false;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double c = cost[i * n + j];
          if (dist[i] + c < dist[m + j] - 1e-15) {
            dist[m + j] = dist[i] + c;
            prev[m + j] = static_cast<long>(i);
            changed = true;
          }
          if (flow[i * n + j] > 0 && dist[m + j] - c < dist[i] - 1e-15) {
            dist[i] = dist[m + j] - c;
            prev[i] = static_cast<long>(m + j);
            changed = true;
          }
        }
      if (!changed) break;
    }
    std::size_t sink = N;
    for (std::size_t j = 0; j < n; ++j)
      if (demand[j] > 0 && (sink == N || dist[m + j] < dist[sink])) sink = m + j;
    // Push one unit along the path.
    std::size_t v = sink;
    while (prev[v] != -1) {
      const auto u = static_cast<std::size_t>(prev[v]);
      if (u < m) {
        ++flow[u * n + (v - m)];
        total += cost[u * n + (v - m)];
      } else {
        --flow[v * n + (u - m)];
        total -= cost[v * n + (u - m)];
      }
      v = u;
    }
    --supply[v];
    --demand[sink - m];
  }
  return total;
}

}  // namespace bidi::testing

#include <benchmark/benchmark.h>

#include <random>

#include "bidi/beam.hpp"
#include "bidi/bidi.hpp"
#include "bidi/synthetic.hpp"

namespace {

using namespace bidi;

// A trained trigram model over the synthetic dialogue corpus.
struct Fixture {
  Vocabulary vocab;
  std::unique_ptr<NGramLM> model;
  std::vector<TokenSeq> prefixes;
  TokenSeq source;

  Fixture() {
    std::vector<SurfacePair> pairs;
    for (const auto& [s, t] : synthetic::dialogue_corpus(5000, 1)) pairs.push_back({tokenize(s), tokenize(t)});
    vocab = Vocabulary::build(pairs);
    std::vector<SentencePair> encoded;
    for (const auto& p : pairs) encoded.push_back(vocab.encode(p));
    model = std::make_unique<NGramLM>(NGramLM::train(encoded, vocab.size(), Direction::regular));
    source = encoded.front().source;
    for (std::size_t i = 0; i < 64; ++i) prefixes.push_back(TokenSeq(encoded[i].target.begin(), encoded[i].target.begin() + 2));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_ExpandScores(benchmark::State& state, Execution ex) {
  const auto& f = fixture();
  const auto alive = static_cast<std::size_t>(state.range(0));
  std::span<const TokenSeq> prefixes(f.prefixes.data(), alive);
  std::vector<double> out(alive * f.vocab.size());
  for (auto _ : state) {
    kernels::expand_scores(ex, *f.model, f.source, prefixes, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * out.size()));
}

void BM_PairwiseBleu(benchmark::State& state, bool parallel) {
  std::mt19937_64 rng(5);
  const auto half = static_cast<std::size_t>(state.range(0));
  std::vector<TokenSeq> a(half), b(half);
  for (auto* side : {&a, &b})
    for (auto& s : *side) {
      s.resize(5 + rng() % 15);
      for (auto& t : s) t = static_cast<TokenId>(4 + rng() % 40);
    }
  SimilaritySpec spec;
  for (auto _ : state) {
    auto m = parallel ? kernels::pairwise_dissimilarity_omp(a, b, spec) : kernels::pairwise_dissimilarity_serial(a, b, spec);
    benchmark::DoNotOptimize(m.values.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * half * half));
}

void BM_BeamSearch(benchmark::State& state, Execution ex) {
  const auto& f = fixture();
  SearchParams p;
  p.B = static_cast<std::size_t>(state.range(0));
  p.execution = ex;
  for (auto _ : state) benchmark::DoNotOptimize(vbs_decode(*f.model, f.source, p));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ExpandScores, serial, Execution::serial)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(BM_ExpandScores, omp, Execution::parallel)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(BM_PairwiseBleu, serial, false)->Arg(4)->Arg(16)->Arg(32);
BENCHMARK_CAPTURE(BM_PairwiseBleu, omp, true)->Arg(4)->Arg(16)->Arg(32);
BENCHMARK_CAPTURE(BM_BeamSearch, serial, Execution::serial)->Arg(4)->Arg(16);
BENCHMARK_CAPTURE(BM_BeamSearch, omp, Execution::parallel)->Arg(4)->Arg(16);

BENCHMARK_MAIN();

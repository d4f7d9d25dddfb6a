#include <doctest.h>

#include <cmath>
#include <random>

#include "bidi/bidi.hpp"
#include "support.hpp"

using namespace bidi;
using bidi::testing::RandomLM;
using bidi::testing::ScriptedLM;

namespace {

constexpr TokenId kA = 4, kB = 5;

// First step: a / b / EOS with the given probabilities; afterwards EOS.
ScriptedLM two_word_model(Direction d, double pa, double pb, double peos) {
  return ScriptedLM(6, d, [=](std::span<const TokenId> prefix) {
    std::vector<double> p(6, 0.0);
    if (prefix.empty()) {
      p[kA] = pa;
      p[kB] = pb;
      p[kEos] = peos;
    } else {
      p[kEos] = 1.0;
    }
    return p;
  });
}

}  // namespace

TEST_CASE("bidis re-ranks a three-candidate beam as evaluated by hand") {
  auto regular = two_word_model(Direction::regular, 0.5, 0.3, 0.2);
  auto reverse = two_word_model(Direction::reverse, 0.1, 0.6, 0.3);
  BidiSParams params{1.0, {3, 4, 0.6}};
  auto r = bidis_decode(regular, reverse, TokenSeq{kA}, params);

  // lp(2) = (7/6)^0.6, lp(1) = 1.
  const double lp2 = std::pow(7.0 / 6.0, 0.6);
  const double s_a = std::log(0.5) / lp2 + std::log(0.1) / lp2;
  const double s_b = std::log(0.3) / lp2 + std::log(0.6) / lp2;
  const double s_eos = std::log(0.2) + std::log(0.3);
  REQUIRE(s_b > s_a);
  REQUIRE(s_a > s_eos);

  REQUIRE(r.candidates.size() == 3);
  CHECK(r.candidates[0].hypothesis.tokens == TokenSeq{kB, kEos});
  CHECK(r.candidates[0].vbs_rank == 2);
  CHECK(r.candidates[0].score == doctest::Approx(s_b).epsilon(1e-14));
  CHECK(r.candidates[1].hypothesis.tokens == TokenSeq{kA, kEos});
  CHECK(r.candidates[1].vbs_rank == 1);
  CHECK(r.candidates[1].score == doctest::Approx(s_a).epsilon(1e-14));
  CHECK(r.candidates[2].hypothesis.tokens == TokenSeq{kEos});
  CHECK(r.candidates[2].score == doctest::Approx(s_eos).epsilon(1e-14));
  CHECK(r.output.selected.tokens == TokenSeq{kB, kEos});
  CHECK(r.output.selected_index == 2);
  CHECK(r.rescoring_evals == 3);
}

TEST_CASE("bidis degenerate cases") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t V = 5 + rng() % 8;
    RandomLM regular(V, rng(), Direction::regular, 1.0);
    RandomLM reverse(V, rng(), Direction::reverse, 1.0);
    const TokenSeq src{static_cast<TokenId>(rng() % V)};
    const SearchParams search{1 + rng() % 6, 2 + rng() % 6, 0.6};
    const auto vbs = vbs_decode(regular, src, search);

    auto zero = bidis_decode(regular, reverse, src, {0.0, search});
    CHECK(zero.output.selected == vbs.selected);
    CHECK(zero.output.selected_index == 1);

    auto single = search;
    single.B = 1;
    const double lambda = static_cast<double>(rng() % 100) / 10.0;
    CHECK(bidis_decode(regular, reverse, src, {lambda, single}).output.selected ==
          vbs_decode(regular, src, single).selected);

    // Stored scores decompose into independently recomputed terms.
    auto r = bidis_decode(regular, reverse, src, {lambda, search});
    for (const auto& c : r.candidates) {
      const auto& h = c.hypothesis;
      const double lp = std::pow((5.0 + static_cast<double>(h.tokens.size())) / 6.0, 0.6);
      const double t1 = bidi::prefix_logprob(regular, src, h.tokens) / lp;
      TokenSeq rev(h.tokens.begin(), h.tokens.end() - (h.finished ? 1 : 0));
      std::reverse(rev.begin(), rev.end());
      rev.push_back(kEos);
      const double t2 = bidi::prefix_logprob(reverse, src, rev) / lp;
      CHECK(std::abs(c.score - (t1 + lambda * t2)) <= 1e-12);
    }
  }
}

TEST_CASE("bidis direction checks") {
  RandomLM a(6, 1, Direction::regular), b(6, 2, Direction::reverse);
  CHECK_THROWS(bidis_decode(b, a, TokenSeq{4}, {}));
  CHECK_THROWS(bidis_decode(a, a, TokenSeq{4}, {}));
}

TEST_CASE("unreverse") {
  Hypothesis h{{kB, kA, 7, kEos}, -3.0, true};
  auto u = unreverse(h);
  CHECK(u.tokens == TokenSeq{7, kA, kB, kEos});
  CHECK(u.logprob == -3.0);
  Hypothesis open{{kB, kA}, -1.0, false};
  CHECK(unreverse(open).tokens == TokenSeq{kA, kB});
}

TEST_CASE("bidia basics") {
  SimilaritySpec bleu;
  bleu.T = 4;

  SUBCASE("odd beam rejected") {
    RandomLM a(6, 1, Direction::regular), b(6, 2, Direction::reverse);
    CHECK_THROWS_AS(bidia_decode(a, b, TokenSeq{4}, {3, 4, 0.6}, bleu), ParameterError);
    CHECK_THROWS_AS(bidia_decode(a, b, TokenSeq{4}, {1, 4, 0.6}, bleu), ParameterError);
  }
  SUBCASE("wmd without resources rejected") {
    RandomLM a(6, 1, Direction::regular), b(6, 2, Direction::reverse);
    SimilaritySpec wmd = bleu;
    wmd.kind = SimilarityKind::wmd_t;
    CHECK_THROWS_AS(bidia_decode(a, b, TokenSeq{4}, {4, 4, 0.6}, wmd), ParameterError);
  }
  SUBCASE("B = 2 forces the only pair") {
    RandomLM a(8, 3, Direction::regular, 1.0), b(8, 4, Direction::reverse, 1.0);
    auto r = bidia_decode(a, b, TokenSeq{5}, {2, 5, 0.6}, bleu);
    CHECK(r.pairwise_evals == 1);
    CHECK(r.output.selected == vbs_decode(a, TokenSeq{5}, {1, 5, 0.6}).selected);
  }
  SUBCASE("identical half-beams pick a diagonal pair") {
    auto a = two_word_model(Direction::regular, 0.5, 0.3, 0.2);
    auto b = two_word_model(Direction::reverse, 0.5, 0.3, 0.2);
    auto r = bidia_decode(a, b, TokenSeq{kA}, {6, 4, 0.6}, bleu);
    REQUIRE(r.output.beam.size() == 3);
    CHECK(r.output.beam == r.reverse_beam_regular_order);
    CHECK(r.regular_index == r.reverse_index);
    CHECK(r.output.selected == r.output.beam[r.regular_index]);
  }
}

TEST_CASE("bidia invariants on random models") {
  std::mt19937_64 rng(41);
  SimilaritySpec bleu;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t V = 6 + rng() % 8, half = 1 + rng() % 4, T = 2 + rng() % 5;
    RandomLM regular(V, rng(), Direction::regular, 1.5);
    RandomLM reverse(V, rng(), Direction::reverse, 1.5);
    const TokenSeq src{static_cast<TokenId>(rng() % V)};
    const SearchParams params{2 * half, T, 0.6};
    bleu.T = T;
    auto r = bidia_decode(regular, reverse, src, params, bleu);

    // Output comes from S.
    CHECK(std::find(r.output.beam.begin(), r.output.beam.end(), r.output.selected) != r.output.beam.end());
    CHECK(r.output.beam == r.regular_run.beam);
    CHECK(r.output.selected_index == r.regular_index + 1);

    // Un-reversed S' hypotheses still carry their reverse-model logprob.
    for (const auto& h : r.reverse_beam_regular_order) {
      const TokenSeq words = strip_eos(h.tokens);
      if (h.finished)
        CHECK(reverse_sequence_logprob(reverse, src, words) == h.logprob);
      else
        CHECK(bidi::prefix_logprob(reverse, src, reverse_target(words)) == h.logprob);
    }

    CHECK(r.output.expansions == r.regular_run.expansions + r.reverse_run.expansions);
    CHECK(r.regular_run.expansions <= T * half * V);
    CHECK(r.reverse_run.expansions <= T * half * V);

    auto serial = params;
    serial.execution = Execution::serial;
    auto s = bidia_decode(regular, reverse, src, serial, bleu);
    CHECK(s.output == r.output);
    CHECK(s.dissimilarities == r.dissimilarities);
  }
}

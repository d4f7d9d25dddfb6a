#include "bidi/bidi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bidi {

BidiSResult bidis_rescore(const DecodeOutput& regular_run, const LanguageModel& reverse,
                          std::span<const TokenId> source, double lambda, double alpha) {
  if (reverse.direction() != Direction::reverse) throw std::invalid_argument("bidis: second model must be reverse");
  if (!(lambda >= 0.0)) throw ParameterError("bidis: lambda must be >= 0");

  BidiSResult result;
  for (std::size_t r = 0; r < regular_run.beam.size(); ++r) {
    const Hypothesis& h = regular_run.beam[r];
    RescoredCandidate c;
    c.hypothesis = h;
    c.vbs_rank = r + 1;
    const double lp = length_penalty(h.tokens.size(), alpha);
    c.regular_term = h.logprob / lp;
    c.reverse_term = reverse_sequence_logprob(reverse, source, strip_eos(h.tokens)) / lp;
    c.score = c.regular_term + lambda * c.reverse_term;
    ++result.rescoring_evals;
    result.candidates.push_back(std::move(c));
  }
  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const RescoredCandidate& a, const RescoredCandidate& b) { return a.score > b.score; });

  result.output.expansions = regular_run.expansions;
  result.output.sort_events = regular_run.sort_events;
  for (const auto& c : result.candidates) result.output.beam.push_back(c.hypothesis);
  result.output.selected = result.candidates.front().hypothesis;
  result.output.selected_index = result.candidates.front().vbs_rank;
  return result;
}

BidiSResult bidis_decode(const LanguageModel& regular, const LanguageModel& reverse, std::span<const TokenId> source,
                         const BidiSParams& params) {
  if (regular.direction() != Direction::regular) throw std::invalid_argument("bidis: first model must be regular");
  if (reverse.direction() != Direction::reverse) throw std::invalid_argument("bidis: second model must be reverse");
  if (regular.vocab_size() != reverse.vocab_size()) throw std::invalid_argument("bidis: vocabulary mismatch");
  if (!(params.lambda >= 0.0)) throw ParameterError("bidis: lambda must be >= 0");
  const auto run = vbs_decode(regular, source, params.search);
  return bidis_rescore(run, reverse, source, params.lambda, params.search.alpha);
}

Hypothesis unreverse(const Hypothesis& reverse_native) {
  Hypothesis h;
  h.tokens = reverse_target(strip_eos(reverse_native.tokens));
  if (reverse_native.finished) h.tokens.push_back(kEos);
  h.logprob = reverse_native.logprob;
  h.finished = reverse_native.finished;
  return h;
}

namespace kernels {

namespace {

PairwiseMatrix pairwise_dissimilarity(Execution ex, const std::vector<TokenSeq>& regular,
                                      const std::vector<TokenSeq>& reverse, const SimilaritySpec& spec) {
  const std::size_t rows = regular.size(), cols = reverse.size();
  std::vector<Dissimilarity> cells(rows * cols);
  for_each_index(ex, rows * cols,
                 [&](std::size_t k) { cells[k] = dissimilarity(regular[k / cols], reverse[k % cols], spec); });

  PairwiseMatrix m;
  m.values.resize(cells.size());
  m.degenerate.resize(cells.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    if (c.value) worst = std::max(worst, *c.value);
    m.oov_dropped += c.oov_dropped;
  }
  worst = std::isfinite(worst) ? worst + 1.0 : 1.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    m.degenerate[k] = !cells[k].value.has_value();
    m.values[k] = cells[k].value.value_or(worst);
  }
  return m;
}

}  // namespace

PairwiseMatrix pairwise_dissimilarity_serial(const std::vector<TokenSeq>& regular, const std::vector<TokenSeq>& reverse,
                                             const SimilaritySpec& spec) {
  return pairwise_dissimilarity(Execution::serial, regular, reverse, spec);
}

PairwiseMatrix pairwise_dissimilarity_omp(const std::vector<TokenSeq>& regular, const std::vector<TokenSeq>& reverse,
                                          const SimilaritySpec& spec) {
  return pairwise_dissimilarity(Execution::parallel, regular, reverse, spec);
}

}  // namespace kernels

BidiAResult bidia_decode(const LanguageModel& regular, const LanguageModel& reverse, std::span<const TokenId> source,
                         const SearchParams& params, const SimilaritySpec& measure) {
  params.validate();
  if (params.B < 2 || params.B % 2 != 0) throw ParameterError("bidia: beam size B must be even and >= 2");
  measure.validate();
  if (regular.direction() != Direction::regular) throw std::invalid_argument("bidia: first model must be regular");
  if (reverse.direction() != Direction::reverse) throw std::invalid_argument("bidia: second model must be reverse");
  if (regular.vocab_size() != reverse.vocab_size()) throw std::invalid_argument("bidia: vocabulary mismatch");

  SearchParams half = params;
  half.B = params.B / 2;

  BidiAResult r;
  r.regular_run = vbs_decode(regular, source, half);
  r.reverse_run = vbs_decode(reverse, source, half);
  for (const auto& h : r.reverse_run.beam) r.reverse_beam_regular_order.push_back(unreverse(h));

  std::vector<TokenSeq> lhs, rhs;
  for (const auto& h : r.regular_run.beam) lhs.push_back(strip_eos(h.tokens));
  for (const auto& h : r.reverse_beam_regular_order) rhs.push_back(strip_eos(h.tokens));
  auto matrix = params.execution == Execution::parallel ? kernels::pairwise_dissimilarity_omp(lhs, rhs, measure)
                                                        : kernels::pairwise_dissimilarity_serial(lhs, rhs, measure);
  r.dissimilarities = std::move(matrix.values);
  r.degenerate = std::move(matrix.degenerate);
  r.oov_dropped = matrix.oov_dropped;
  r.pairwise_evals = lhs.size() * rhs.size();

  const std::size_t cols = rhs.size();
  std::vector<double> regular_scores;
  for (const auto& h : r.regular_run.beam) regular_scores.push_back(normalized_score(h, params.alpha));
  std::size_t best = 0;
  for (std::size_t k = 1; k < r.dissimilarities.size(); ++k) {
    const double d = r.dissimilarities[k], d_best = r.dissimilarities[best];
    if (d != d_best) {
      if (d < d_best) best = k;
      continue;
    }
    const double s = regular_scores[k / cols], s_best = regular_scores[best / cols];
    if (s > s_best) best = k;
    // Equal scores: row-major order already prefers the lower (row, col).
  }
  r.regular_index = best / cols;
  r.reverse_index = best % cols;
  r.pair = {r.regular_run.beam[r.regular_index], r.reverse_beam_regular_order[r.reverse_index],
            r.dissimilarities[best]};

  r.output.beam = r.regular_run.beam;
  r.output.selected = r.pair.regular_hypothesis;
  r.output.selected_index = r.regular_index + 1;
  r.output.expansions = r.regular_run.expansions + r.reverse_run.expansions;
  r.output.sort_events = r.regular_run.sort_events;
  r.output.sort_events.insert(r.output.sort_events.end(), r.reverse_run.sort_events.begin(),
                              r.reverse_run.sort_events.end());
  return r;
}

}  // namespace bidi

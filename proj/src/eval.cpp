#include "bidi/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace bidi {

BestHypothesis best_hypothesis(const std::vector<Hypothesis>& beam, const TokenSeq& reference) {
  if (beam.empty()) throw std::invalid_argument("best_hypothesis: empty beam");
  std::vector<TokenSeq> candidates;
  candidates.reserve(beam.size());
  for (const auto& h : beam) candidates.push_back(strip_eos(h.tokens));
  BestHypothesis best;
  const std::size_t r = best_candidate_index(candidates, strip_eos(reference), &best.sentence_bleu);
  best.hypothesis = beam[r];
  best.rank = r + 1;
  return best;
}

std::size_t RankHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

RankHistogram rank_histogram(const std::vector<std::size_t>& selected_indices, std::size_t B) {
  RankHistogram h;
  h.counts.assign(B, 0);
  for (auto idx : selected_indices) {
    if (idx < 1 || idx > B)
      throw std::out_of_range("rank_histogram: index " + std::to_string(idx) + " outside [1, " + std::to_string(B) +
                              "]");
    ++h.counts[idx - 1];
  }
  return h;
}

RankHistogram rank_histogram(const std::vector<DecodeOutput>& runs, std::size_t B) {
  std::vector<std::size_t> idx;
  for (const auto& r : runs) idx.push_back(r.selected_index);
  return rank_histogram(idx, B);
}

std::vector<std::pair<std::string, std::size_t>> word_position_frequency(const std::vector<SurfacePair>& corpus,
                                                                         std::size_t position, Direction order,
                                                                         std::size_t top_k) {
  if (position < 1) throw ParameterError("word_position_frequency: position is 1-based");
  if (top_k < 1) throw ParameterError("word_position_frequency: top_k must be >= 1");
  std::map<std::string, std::size_t> tally;
  for (const auto& p : corpus) {
    if (p.target.size() < position) continue;
    const std::size_t i = order == Direction::regular ? position - 1 : p.target.size() - position;
    ++tally[p.target[i]];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(tally.begin(), tally.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

}  // namespace bidi

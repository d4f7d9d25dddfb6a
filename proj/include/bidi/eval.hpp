#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bidi/beam.hpp"
#include "bidi/ngram.hpp"

namespace bidi {

struct BestHypothesis {
  Hypothesis hypothesis;
  std::size_t rank = 1;  // 1-based position in the beam
  double sentence_bleu = 0.0;
};

// Index of the candidate with the highest smoothed sentence BLEU-4 against
// `reference`; ties go to the lower index. Works on ids or surfaces.
template <typename Seq>
std::size_t best_candidate_index(const std::vector<Seq>& candidates, const Seq& reference, double* bleu = nullptr) {
  if (candidates.empty()) throw std::invalid_argument("best_candidate_index: no candidates");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    const double score = sentence_bleu4(candidates[r], reference);
    if (r == 0 || score > best_score) {
      best = r;
      best_score = score;
    }
  }
  if (bleu) *bleu = best_score;
  return best;
}

/// Beam element with the highest smoothed sentence BLEU-4 against
/// `reference` (EOS stripped on both sides); ties go to the lower rank.
BestHypothesis best_hypothesis(const std::vector<Hypothesis>& beam, const TokenSeq& reference);

struct RankHistogram {
  std::vector<std::size_t> counts;  // counts[i] = runs whose index is i + 1

  std::size_t total() const;
};

RankHistogram rank_histogram(const std::vector<std::size_t>& selected_indices, std::size_t B);
RankHistogram rank_histogram(const std::vector<DecodeOutput>& runs, std::size_t B);

/// Top-k target words at a 1-based position, optionally after reversing each
/// target. Descending count, ties broken lexicographically by surface.
std::vector<std::pair<std::string, std::size_t>> word_position_frequency(const std::vector<SurfacePair>& corpus,
                                                                         std::size_t position, Direction order,
                                                                         std::size_t top_k = 50);

}  // namespace bidi

#pragma once

#include <vector>

#include "bidi/beam.hpp"
#include "bidi/similarity.hpp"

namespace bidi {

struct BidiSParams {
  double lambda = 1.0;  // picked on validation data by the CLI
  SearchParams search;
};

// One regular-beam candidate after bidirectional re-scoring:
// score = regular_term + lambda * reverse_term.
struct RescoredCandidate {
  Hypothesis hypothesis;
  std::size_t vbs_rank = 0;  // 1-based rank in the regular beam
  double regular_term = 0.0;  // log P(Y+|X) / lp(Y)
  double reverse_term = 0.0;  // log P(Y-|X) / lp(Y), reverse model
  double score = 0.0;
};

struct BidiSResult {
  DecodeOutput output;  // beam re-ranked; selected_index is the VBS rank
  std::vector<RescoredCandidate> candidates;  // re-ranked order
  std::size_t rescoring_evals = 0;
};

/// Re-scores the regular model's beam with the reverse model. Ties keep the
/// original VBS order.
BidiSResult bidis_decode(const LanguageModel& regular, const LanguageModel& reverse, std::span<const TokenId> source,
                         const BidiSParams& params);

// Re-ranks an existing regular beam. bidis_decode is this after vbs_decode;
// the CLI uses it directly to sweep lambda without re-decoding.
BidiSResult bidis_rescore(const DecodeOutput& regular_run, const LanguageModel& reverse,
                          std::span<const TokenId> source, double lambda, double alpha);

struct AgreementPair {
  Hypothesis regular_hypothesis;
  Hypothesis reverse_hypothesis_regular_order;
  double dissimilarity = 0.0;
};

struct BidiAResult {
  DecodeOutput output;  // selected is from S; beam is S
  DecodeOutput regular_run;
  DecodeOutput reverse_run;  // native (reversed) token order
  std::vector<Hypothesis> reverse_beam_regular_order;
  // Row-major |S| x |S'| dissimilarities; degenerate pairs hold a value
  // larger than every finite entry.
  std::vector<double> dissimilarities;
  std::vector<char> degenerate;
  std::size_t regular_index = 0;  // 0-based winner within S
  std::size_t reverse_index = 0;  // 0-based winner within S'
  AgreementPair pair;
  std::size_t pairwise_evals = 0;
  std::size_t oov_dropped = 0;
};

/// Un-reverses a reverse-model hypothesis: strips EOS, reverses, and
/// re-appends EOS when the hypothesis had finished. logprob is kept.
Hypothesis unreverse(const Hypothesis& reverse_native);

/// Runs two half-width searches (B/2 each) with the regular and reverse
/// models, then outputs the regular member of the least dissimilar pair.
/// Ties: higher regular normalized score, then lower regular index, then
/// lower reverse index.
BidiAResult bidia_decode(const LanguageModel& regular, const LanguageModel& reverse, std::span<const TokenId> source,
                         const SearchParams& params, const SimilaritySpec& measure);

// The (|S| x |S'|) dissimilarity matrix. Serial reference and OpenMP version.
struct PairwiseMatrix {
  std::vector<double> values;
  std::vector<char> degenerate;
  std::size_t oov_dropped = 0;
};

namespace kernels {
PairwiseMatrix pairwise_dissimilarity_serial(const std::vector<TokenSeq>& regular, const std::vector<TokenSeq>& reverse,
                                             const SimilaritySpec& spec);
PairwiseMatrix pairwise_dissimilarity_omp(const std::vector<TokenSeq>& regular, const std::vector<TokenSeq>& reverse,
                                          const SimilaritySpec& spec);
}  // namespace kernels

}  // namespace bidi

#pragma once

#include <cstddef>
#include <vector>

#include "bidi/corpus.hpp"
#include "bidi/kernels.hpp"
#include "bidi/lm.hpp"

namespace bidi {

struct SearchParams {
  std::size_t B = 4;   // beam size
  std::size_t T = 20;  // maximum hypothesis length, EOS included
  double alpha = 0.6;  // length-penalty exponent
  Execution execution = Execution::parallel;

  void validate() const;
};

struct Hypothesis {
  TokenSeq tokens;  // no BOS; ends with EOS iff finished
  double logprob = 0.0;
  bool finished = false;

  bool operator==(const Hypothesis&) const = default;
};

struct DecodeOutput {
  Hypothesis selected;
  std::vector<Hypothesis> beam;  // best first
  std::size_t selected_index = 1;  // 1-based
  std::size_t expansions = 0;      // sum over steps of alive * V
  std::vector<std::size_t> sort_events;  // candidates sorted at each step

  bool operator==(const DecodeOutput&) const = default;
};

/// ((5 + length)^alpha) / (6^alpha). Throws ParameterError for length < 1.
double length_penalty(std::size_t length, double alpha);

double normalized_score(double logprob, std::size_t length, double alpha);

inline double normalized_score(const Hypothesis& h, double alpha) {
  return normalized_score(h.logprob, h.tokens.size(), alpha);
}

// Strict weak order used everywhere a beam is ranked: higher normalized
// score first, then lexicographically smaller token ids.
bool ranks_before(const Hypothesis& a, const Hypothesis& b, double alpha);

// Vanilla beam search.
//
// Every alive hypothesis is expanded by all V ids and the candidates are
// ranked by normalized score. Walking that ranking, EOS-terminated
// candidates move to the finished set and the rest fill at most B alive
// slots; finished hypotheses never occupy an alive slot. The search stops
// once B hypotheses have finished or after T steps, in which case the best
// unfinished hypotheses pad the beam. Output tokens stay in the model's
// native order.
DecodeOutput vbs_decode(const LanguageModel& model, std::span<const TokenId> source, const SearchParams& params);

}  // namespace bidi

#include "bidi/beam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bidi {

void SearchParams::validate() const {
  if (B < 1) throw ParameterError("beam size B must be >= 1");
  if (T < 1) throw ParameterError("maximum length T must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
}

double length_penalty(std::size_t length, double alpha) {
  if (length < 1) throw ParameterError("length_penalty: length must be >= 1");
  return std::pow(5.0 + static_cast<double>(length), alpha) / std::pow(6.0, alpha);
}

double normalized_score(double logprob, std::size_t length, double alpha) {
  return logprob / length_penalty(length, alpha);
}

bool ranks_before(const Hypothesis& a, const Hypothesis& b, double alpha) {
  const double sa = normalized_score(a, alpha);
  const double sb = normalized_score(b, alpha);
  if (sa != sb) return sa > sb;
  return a.tokens < b.tokens;
}

namespace {

struct Candidate {
  std::size_t parent;
  TokenId token;
  double logprob;
  double score;
};

}  // namespace

DecodeOutput vbs_decode(const LanguageModel& model, std::span<const TokenId> source, const SearchParams& params) {
  params.validate();
  const std::size_t V = model.vocab_size();
  if (V < 2) throw ParameterError("vbs_decode: vocabulary must hold at least two ids");
  check_ids(source, V);

  DecodeOutput out;
  std::vector<Hypothesis> alive(1);
  std::vector<Hypothesis> finished;
  std::vector<TokenSeq> prefixes;
  std::vector<double> scores;
  std::vector<Candidate> candidates;

  for (std::size_t step = 1; step <= params.T && finished.size() < params.B && !alive.empty(); ++step) {
    prefixes.clear();
    for (const auto& h : alive) prefixes.push_back(h.tokens);
    scores.assign(alive.size() * V, 0.0);
    kernels::expand_scores(params.execution, model, source, prefixes, scores);
    out.expansions += alive.size() * V;

    candidates.clear();
    for (std::size_t h = 0; h < alive.size(); ++h) {
      for (std::size_t w = 0; w < V; ++w) {
        const double lp = alive[h].logprob + scores[h * V + w];
        candidates.push_back({h, static_cast<TokenId>(w), lp, normalized_score(lp, step, params.alpha)});
      }
    }
    out.sort_events.push_back(candidates.size());
    // All parents share one length, so comparing parent tokens then the new
    // token is the lexicographic order on the extended sequences.
    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.parent != b.parent) {
        const auto& ta = alive[a.parent].tokens;
        const auto& tb = alive[b.parent].tokens;
        if (ta != tb) return ta < tb;
      }
      return a.token < b.token;
    });

    std::vector<Hypothesis> next;
    for (const auto& c : candidates) {
      if (next.size() == params.B || finished.size() == params.B) break;
      Hypothesis h{alive[c.parent].tokens, c.logprob, c.token == kEos};
      h.tokens.push_back(c.token);
      (h.finished ? finished : next).push_back(std::move(h));
    }
    alive = std::move(next);
  }

  // `alive` is already best first.
  for (std::size_t i = 0; finished.size() < params.B && i < alive.size(); ++i) finished.push_back(alive[i]);

  std::sort(finished.begin(), finished.end(),
            [&](const Hypothesis& a, const Hypothesis& b) { return ranks_before(a, b, params.alpha); });
  out.beam = std::move(finished);
  out.selected = out.beam.front();
  out.selected_index = 1;
  return out;
}

}  // namespace bidi

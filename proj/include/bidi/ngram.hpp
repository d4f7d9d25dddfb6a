#pragma once

// N-gram counting and the BLEU variants built on it. Templated on the
// sequence type so both token ids and surface strings can be scored.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace bidi {

template <typename Seq>
using NGramCounts = std::map<std::vector<typename Seq::value_type>, std::uint64_t>;

template <typename Seq>
NGramCounts<Seq> count_ngrams(const Seq& seq, std::size_t n) {
  NGramCounts<Seq> counts;
  if (n == 0 || seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i)
    ++counts[std::vector<typename Seq::value_type>(seq.begin() + i, seq.begin() + i + n)];
  return counts;
}

// Clipped matches and hypothesis n-gram total for one order.
struct NGramMatch {
  std::uint64_t matches = 0;
  std::uint64_t total = 0;
};

template <typename Seq>
NGramMatch clipped_match(const Seq& hypothesis, const Seq& reference, std::size_t n) {
  const auto hyp = count_ngrams(hypothesis, n);
  const auto ref = count_ngrams(reference, n);
  NGramMatch m;
  for (const auto& [gram, count] : hyp) {
    m.total += count;
    auto it = ref.find(gram);
    if (it != ref.end()) m.matches += std::min(count, it->second);
  }
  return m;
}

// Sentence-level BLEU with a caller-supplied brevity penalty. When any raw
// precision is zero, orders n >= 2 use (matches + 1) / (total + 1).
template <typename Seq>
double smoothed_sentence_bleu(const Seq& hypothesis, const Seq& reference, std::span<const double> weights,
                              double brevity_penalty) {
  const std::size_t N = weights.size();
  std::vector<NGramMatch> m(N);
  bool any_zero = false;
  for (std::size_t n = 1; n <= N; ++n) {
    m[n - 1] = clipped_match(hypothesis, reference, n);
    if (m[n - 1].matches == 0) any_zero = true;
  }
  if (m[0].matches == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    double num = static_cast<double>(m[n - 1].matches);
    double den = static_cast<double>(m[n - 1].total);
    if (any_zero && n >= 2) {
      num += 1.0;
      den += 1.0;
    }
    log_sum += weights[n - 1] * std::log(num / den);
  }
  return brevity_penalty * std::exp(log_sum);
}

// Standard BLEU brevity penalty min(1, exp(1 - r / c)); 0 for an empty candidate.
inline double standard_brevity_penalty(std::size_t candidate_len, std::size_t reference_len) {
  if (candidate_len == 0) return 0.0;
  if (candidate_len >= reference_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(reference_len) / static_cast<double>(candidate_len));
}

/// Smoothed sentence BLEU-4 with the standard brevity penalty, the score the
/// best-hypothesis oracle maximizes.
template <typename Seq>
double sentence_bleu4(const Seq& hypothesis, const Seq& reference) {
  static constexpr double kUniform[4] = {0.25, 0.25, 0.25, 0.25};
  if (hypothesis.empty()) return 0.0;
  return smoothed_sentence_bleu(hypothesis, reference, std::span<const double>(kUniform),
                                standard_brevity_penalty(hypothesis.size(), reference.size()));
}

// Corpus statistics for micro-averaged BLEU-4. Merging is exact integer
// addition, so accumulation order does not matter.
struct BleuAccumulator {
  std::uint64_t matches[4] = {0, 0, 0, 0};
  std::uint64_t totals[4] = {0, 0, 0, 0};
  std::uint64_t candidate_length = 0;
  std::uint64_t reference_length = 0;

  template <typename Seq>
  void add(const Seq& candidate, const Seq& reference) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto m = clipped_match(candidate, reference, n);
      matches[n - 1] += m.matches;
      totals[n - 1] += m.total;
    }
    candidate_length += candidate.size();
    reference_length += reference.size();
  }

  void merge(const BleuAccumulator& other) {
    for (std::size_t n = 0; n < 4; ++n) {
      matches[n] += other.matches[n];
      totals[n] += other.totals[n];
    }
    candidate_length += other.candidate_length;
    reference_length += other.reference_length;
  }

  // 100 * BP * exp(1/4 sum log p_n); 0 when any order has no match.
  double score() const {
    for (std::size_t n = 0; n < 4; ++n)
      if (matches[n] == 0) return 0.0;
    double log_sum = 0.0;
    for (std::size_t n = 0; n < 4; ++n)
      log_sum += 0.25 * std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
    const double bp = standard_brevity_penalty(candidate_length, reference_length);
    return 100.0 * bp * std::exp(log_sum);
  }
};

template <typename Seq>
double corpus_bleu4(std::span<const std::pair<Seq, Seq>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("corpus_bleu4: empty corpus");
  BleuAccumulator acc;
  for (const auto& [candidate, reference] : pairs) acc.add(candidate, reference);
  return acc.score();
}

template <typename Seq>
double corpus_bleu4(const std::vector<std::pair<Seq, Seq>>& pairs) {
  return corpus_bleu4(std::span<const std::pair<Seq, Seq>>(pairs));
}

/// Unique n-grams over all sentences divided by the total number of words.
template <typename Seq>
double distinct_n(std::span<const Seq> sentences, std::size_t n) {
  if (n < 1) throw std::invalid_argument("distinct_n: n must be >= 1");
  if (sentences.empty()) throw std::invalid_argument("distinct_n: empty corpus");
  NGramCounts<Seq> unique;
  std::uint64_t words = 0;
  for (const auto& s : sentences) {
    words += s.size();
    for (auto& [gram, c] : count_ngrams(s, n)) unique[gram] += c;
  }
  if (words == 0) throw std::invalid_argument("distinct_n: corpus has no words");
  return static_cast<double>(unique.size()) / static_cast<double>(words);
}

template <typename Seq>
double distinct_n(const std::vector<Seq>& sentences, std::size_t n) {
  return distinct_n(std::span<const Seq>(sentences), n);
}

}  // namespace bidi

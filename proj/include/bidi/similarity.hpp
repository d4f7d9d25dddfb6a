#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bidi/corpus.hpp"
#include "bidi/ngram.hpp"

namespace bidi {

enum class SimilarityKind { bleu_t, wmd_t };
enum class BpMode { divide, multiply };

std::string_view to_string(SimilarityKind k);
std::string_view to_string(BpMode m);
BpMode parse_bp_mode(std::string_view s);

// Brevity penalty against the decoder's maximum length: min(1, exp(1 - T/c)).
double bp_t(std::size_t candidate_length, std::size_t T);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  /// Text vector format: an optional "count dim" header line, then
  /// "word v1 ... vd" per line. Duplicate words keep their first vector.
  static EmbeddingTable load(const std::filesystem::path& path);

  // Returns false (and keeps the old vector) if `word` is already present.
  bool add(const std::string& word, std::span<const double> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;
  // nullopt for absent words; callers decide how to treat them.
  std::optional<std::size_t> row(std::string_view word) const;
  std::span<const double> vector(std::size_t row) const;
  const std::string& word(std::size_t row) const { return words_[row]; }

  double distance(std::size_t row_a, std::size_t row_b) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> rows_;
  std::vector<double> data_;
};

using StopwordSet = std::unordered_set<std::string>;

StopwordSet load_stopwords(const std::filesystem::path& path);

// Balanced transportation problem. `cost` is row-major supply x demand.
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<double> cost;
};

struct TransportSolution {
  std::vector<double> flow;  // row-major, same shape as cost
  double cost = 0.0;
  std::size_t pivots = 0;
};

/// Exact optimum of the transportation LP by the transportation simplex
/// (north-west corner start, u-v potentials, Bland's rule for pivoting).
TransportSolution solve_transport(const TransportProblem& problem);

struct WmdResult {
  std::optional<double> distance;  // nullopt: a side was empty after filtering
  std::size_t oov_dropped = 0;
};

/// Word Mover's Distance between two word sequences. Stopwords and words
/// absent from the table are dropped, each side becomes a normalized bag of
/// its unique remaining words, and the ground cost is Euclidean distance.
WmdResult wmd(const WordSeq& x, const WordSeq& y, const EmbeddingTable& table, const StopwordSet& stopwords);

// Per-vocabulary lookup tables so decoders can compute WMD on token ids.
class WmdContext {
 public:
  WmdContext(const Vocabulary& vocab, std::shared_ptr<const EmbeddingTable> table, StopwordSet stopwords);

  WmdResult distance(const TokenSeq& x, const TokenSeq& y) const;

  const EmbeddingTable& table() const { return *table_; }

 private:
  std::shared_ptr<const EmbeddingTable> table_;
  // Per token id: embedding row, or nullopt for stopwords, markers, and
  // words without a vector. `oov_` flags the last group.
  std::vector<std::optional<std::size_t>> rows_;
  std::vector<bool> oov_;
};

struct SimilaritySpec {
  SimilarityKind kind = SimilarityKind::bleu_t;
  std::size_t T = 20;
  std::vector<double> weights = {0.25, 0.25, 0.25, 0.25};  // w_1 .. w_N
  BpMode bp_mode = BpMode::divide;
  std::shared_ptr<const WmdContext> wmd;  // required for wmd_t

  std::size_t N() const { return weights.size(); }
  void validate() const;
};

template <typename Seq>
double bleu_t(const Seq& hypothesis, const Seq& reference, const SimilaritySpec& spec) {
  if (hypothesis.empty() || reference.empty()) throw std::invalid_argument("bleu_t: empty sequence");
  return smoothed_sentence_bleu(hypothesis, reference, std::span<const double>(spec.weights),
                                bp_t(hypothesis.size(), spec.T));
}

// nullopt marks a degenerate pair: an empty side, or a WMD side left
// empty after filtering. Callers rank those after every finite value.
struct Dissimilarity {
  std::optional<double> value;
  std::size_t oov_dropped = 0;
};

/// d = 1 - BLEU_T for bleu_t. For wmd_t, d = WMD / BP_T (divide) or
/// WMD * BP_T (multiply), with BP_T taken on |y_n|. Inputs are in regular
/// order with EOS stripped.
Dissimilarity dissimilarity(const TokenSeq& y_n, const TokenSeq& y_r, const SimilaritySpec& spec);

}  // namespace bidi

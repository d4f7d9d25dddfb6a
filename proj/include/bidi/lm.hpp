#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "bidi/corpus.hpp"

namespace bidi {

// A conditional next-token scorer P(y_t | source, y_<t). Implementations are
// immutable after construction and safe to query concurrently.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual Direction direction() const = 0;
  virtual std::size_t vocab_size() const = 0;

  // Writes log P(w | source, prefix) for every id w into `out` (size V).
  // `prefix` is in the model's native order and holds no EOS.
  virtual void next_token_logprobs(std::span<const TokenId> source, std::span<const TokenId> prefix,
                                   std::span<double> out) const = 0;

  std::vector<double> next_token_logprobs(std::span<const TokenId> source,
                                          std::span<const TokenId> prefix) const;
};

/// Chain-rule log-probability of `target`, which must end with its only EOS.
/// Accumulates left to right from 0.0, the same order the beam uses.
double sequence_logprob(const LanguageModel& model, std::span<const TokenId> source,
                        std::span<const TokenId> target);

// Chain-rule log-probability of any token sequence in native order; EOS may
// appear only as the last token. Scores unfinished beam hypotheses.
double prefix_logprob(const LanguageModel& model, std::span<const TokenId> source, std::span<const TokenId> tokens);

/// Scores a regular-order target (no EOS) under a reverse-direction model:
/// sequence_logprob(model, source, reverse(target) + [EOS]).
double reverse_sequence_logprob(const LanguageModel& model, std::span<const TokenId> source,
                                std::span<const TokenId> target_regular_order);

struct NGramOptions {
  std::size_t order = 3;
  std::vector<double> weights = {0.2, 0.3, 0.5};  // lambda_1 .. lambda_n
  double k = 0.1;                                 // additive constant
};

// Source-conditioned n-gram model. Each training pair becomes the stream
// [BOS, source..., SEP, target', EOS] and only positions after SEP are
// predicted. Every order is add-k smoothed and the orders are mixed with
// fixed interpolation weights, so every id keeps non-zero probability.
class NGramLM final : public LanguageModel {
 public:
  struct ContextCounts {
    std::map<TokenId, std::uint64_t> next;
    std::uint64_t total = 0;

    bool operator==(const ContextCounts&) const = default;
  };
  // Context tuples of length i-1 for order i; tables_[i-1] holds order i.
  using Table = std::map<TokenSeq, ContextCounts>;

  static NGramLM train(const std::vector<SentencePair>& corpus, std::size_t vocab_size, Direction direction,
                       const NGramOptions& options = {});

  // A non-zero `expected_vocab_size` must match the file's V.
  static NGramLM load(const std::filesystem::path& path, std::size_t expected_vocab_size = 0);
  // Text dump with hex-float reals; load(save(m)) == m bit for bit.
  void save(const std::filesystem::path& path) const;

  Direction direction() const override { return direction_; }
  std::size_t vocab_size() const override { return vocab_size_; }
  std::size_t order() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double k() const { return k_; }
  const std::vector<Table>& tables() const { return tables_; }

  using LanguageModel::next_token_logprobs;
  void next_token_logprobs(std::span<const TokenId> source, std::span<const TokenId> prefix,
                           std::span<double> out) const override;

  bool operator==(const NGramLM& other) const;

 private:
  NGramLM(std::size_t vocab_size, Direction direction, std::vector<double> weights, double k);

  static void validate(std::size_t vocab_size, const std::vector<double>& weights, double k);

  std::size_t vocab_size_;
  Direction direction_;
  std::vector<double> weights_;
  double k_;
  std::vector<Table> tables_;
};

// Throws if any id in `tokens` is outside [0, V).
void check_ids(std::span<const TokenId> tokens, std::size_t vocab_size);

}  // namespace bidi

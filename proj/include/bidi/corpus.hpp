#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bidi {

using TokenId = std::uint32_t;
using TokenSeq = std::vector<TokenId>;
using WordSeq = std::vector<std::string>;

// Reserved ids. Every vocabulary starts with these four markers.
inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kSep = 2;
inline constexpr TokenId kUnk = 3;
inline constexpr std::size_t kNumReserved = 4;

enum class Direction { regular, reverse };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

enum class CorpusFormat { tsv, jsonl };

CorpusFormat parse_corpus_format(std::string_view s);

// Raised for malformed input files. The message names the file and line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for out-of-domain parameters (min_count < 1, bad weights, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lowercases, splits on whitespace and splits off the punctuation marks
/// `.`, `!`, `?`, `,` and `'` as standalone tokens.
WordSeq tokenize(std::string_view line);

// Element-wise reversal. Only targets are ever reversed.
template <typename T>
std::vector<T> reverse_target(const std::vector<T>& target) {
  return std::vector<T>(target.rbegin(), target.rend());
}

struct SurfacePair {
  WordSeq source;
  WordSeq target;

  bool operator==(const SurfacePair&) const = default;
};

struct SentencePair {
  TokenSeq source;
  TokenSeq target;

  bool operator==(const SentencePair&) const = default;
};

class Vocabulary {
 public:
  // Only the reserved markers.
  Vocabulary();

  /// Ids >= 4 are assigned in descending corpus frequency, ties broken
  /// lexicographically. Surfaces rarer than `min_count` map to UNK.
  static Vocabulary build(const std::vector<SurfacePair>& pairs, std::uint64_t min_count = 1);

  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return surfaces_.size(); }

  // Unknown surfaces resolve to kUnk.
  TokenId id(std::string_view surface) const;
  const std::string& surface(TokenId id) const;
  bool contains(std::string_view surface) const;

  TokenSeq encode(const WordSeq& words) const;
  WordSeq decode(const TokenSeq& ids) const;
  SentencePair encode(const SurfacePair& pair) const;

  bool operator==(const Vocabulary& other) const { return surfaces_ == other.surfaces_; }

 private:
  void add(std::string surface);

  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, TokenId> ids_;
};

std::vector<SurfacePair> load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct SplitFractions {
  double train = 0.97;
  double validation = 0.01;
  double test = 0.02;
};

template <typename Pair>
struct CorpusSplit {
  std::vector<Pair> train;
  std::vector<Pair> validation;
  std::vector<Pair> test;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

SplitSizes split_sizes(std::size_t n, const SplitFractions& fractions);

// Seeded permutation of [0, n). Uses the raw engine output only, so the
// order is identical across standard library implementations.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

template <typename Pair>
CorpusSplit<Pair> split_corpus(const std::vector<Pair>& pairs, const SplitFractions& fractions,
                               std::uint64_t seed) {
  const SplitSizes sizes = split_sizes(pairs.size(), fractions);
  const auto order = seeded_permutation(pairs.size(), seed);
  CorpusSplit<Pair> out;
  std::size_t k = 0;
  for (; k < sizes.validation; ++k) out.validation.push_back(pairs[order[k]]);
  for (; k < sizes.validation + sizes.test; ++k) out.test.push_back(pairs[order[k]]);
  for (; k < order.size(); ++k) out.train.push_back(pairs[order[k]]);
  return out;
}

// Drops EOS and everything after it.
TokenSeq strip_eos(const TokenSeq& tokens);

}  // namespace bidi

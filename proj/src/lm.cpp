#include "bidi/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace bidi {

namespace {

constexpr const char* kMagic = "bidi-ngram-lm";
constexpr int kFormatVersion = 1;

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw FormatError("bad real '" + s + "' in model file");
  return x;
}

// The last `len` tokens of [BOS, source..., SEP, prefix...], left-padded with BOS.
TokenSeq context_of(std::span<const TokenId> source, std::span<const TokenId> prefix, std::size_t len) {
  TokenSeq ctx(len, kBos);
  // Walk backwards through the virtual stream.
  const std::size_t stream_len = 1 + source.size() + 1 + prefix.size();
  for (std::size_t k = 0; k < len && k < stream_len; ++k) {
    const std::size_t pos = stream_len - 1 - k;  // index in the stream
    TokenId tok;
    if (pos == 0) {
      tok = kBos;
    } else if (pos <= source.size()) {
      tok = source[pos - 1];
    } else if (pos == source.size() + 1) {
      tok = kSep;
    } else {
      tok = prefix[pos - source.size() - 2];
    }
    ctx[len - 1 - k] = tok;
  }
  return ctx;
}

}  // namespace

void check_ids(std::span<const TokenId> tokens, std::size_t vocab_size) {
  for (auto t : tokens)
    if (t >= vocab_size)
      throw std::out_of_range("token id " + std::to_string(t) + " outside vocabulary of size " +
                              std::to_string(vocab_size));
}

std::vector<double> LanguageModel::next_token_logprobs(std::span<const TokenId> source,
                                                       std::span<const TokenId> prefix) const {
  std::vector<double> out(vocab_size());
  next_token_logprobs(source, prefix, out);
  return out;
}

double prefix_logprob(const LanguageModel& model, std::span<const TokenId> source, std::span<const TokenId> tokens) {
  const auto eos = std::find(tokens.begin(), tokens.end(), kEos);
  if (eos != tokens.end() && eos + 1 != tokens.end())
    throw std::invalid_argument("prefix_logprob: EOS may only appear last");
  std::vector<double> scratch(model.vocab_size());
  double total = 0.0;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    model.next_token_logprobs(source, tokens.first(t), scratch);
    total += scratch[tokens[t]];
  }
  return total;
}

double sequence_logprob(const LanguageModel& model, std::span<const TokenId> source,
                        std::span<const TokenId> target) {
  if (target.empty() || target.back() != kEos || std::count(target.begin(), target.end(), kEos) != 1)
    throw std::invalid_argument("sequence_logprob: target must end with its only EOS");
  return prefix_logprob(model, source, target);
}

double reverse_sequence_logprob(const LanguageModel& model, std::span<const TokenId> source,
                                std::span<const TokenId> target_regular_order) {
  if (model.direction() != Direction::reverse)
    throw std::invalid_argument("reverse_sequence_logprob needs a reverse-direction model");
  TokenSeq stream(target_regular_order.rbegin(), target_regular_order.rend());
  stream.push_back(kEos);
  return sequence_logprob(model, source, stream);
}

NGramLM::NGramLM(std::size_t vocab_size, Direction direction, std::vector<double> weights, double k)
    : vocab_size_(vocab_size), direction_(direction), weights_(std::move(weights)), k_(k),
      tables_(weights_.size()) {}

void NGramLM::validate(std::size_t vocab_size, const std::vector<double>& weights, double k) {
  if (vocab_size < kNumReserved) throw ParameterError("vocabulary smaller than the reserved markers");
  if (weights.empty()) throw ParameterError("n-gram order must be >= 1");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("interpolation weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ParameterError("interpolation weights must sum to 1");
  if (!(k > 0.0)) throw ParameterError("additive constant k must be > 0");
}

NGramLM NGramLM::train(const std::vector<SentencePair>& corpus, std::size_t vocab_size, Direction direction,
                       const NGramOptions& options) {
  if (corpus.empty()) throw ParameterError("cannot train on an empty corpus");
  if (options.weights.size() != options.order)
    throw ParameterError("expected " + std::to_string(options.order) + " interpolation weights");
  validate(vocab_size, options.weights, options.k);

  NGramLM lm(vocab_size, direction, options.weights, options.k);
  for (const auto& pair : corpus) {
    check_ids(pair.source, vocab_size);
    check_ids(pair.target, vocab_size);
    TokenSeq target = direction == Direction::regular ? pair.target : reverse_target(pair.target);
    target.push_back(kEos);
    for (std::size_t t = 0; t < target.size(); ++t) {
      const std::span<const TokenId> prefix(target.data(), t);
      for (std::size_t i = 1; i <= lm.order(); ++i) {
        auto& counts = lm.tables_[i - 1][context_of(pair.source, prefix, i - 1)];
        ++counts.next[target[t]];
        ++counts.total;
      }
    }
  }
  return lm;
}

void NGramLM::next_token_logprobs(std::span<const TokenId> source, std::span<const TokenId> prefix,
                                  std::span<double> out) const {
  if (out.size() != vocab_size_) throw std::invalid_argument("output span must have one slot per token id");
  check_ids(source, vocab_size_);
  check_ids(prefix, vocab_size_);
  std::fill(out.begin(), out.end(), 0.0);
  const double kv = k_ * static_cast<double>(vocab_size_);
  for (std::size_t i = 1; i <= order(); ++i) {
    const double lambda = weights_[i - 1];
    if (lambda == 0.0) continue;
    const auto& table = tables_[i - 1];
    auto found = table.find(context_of(source, prefix, i - 1));
    if (found == table.end()) {
      const double uniform = lambda * (k_ / kv);
      for (auto& p : out) p += uniform;
      continue;
    }
    const ContextCounts& counts = found->second;
    const double denom = static_cast<double>(counts.total) + kv;
    auto it = counts.next.begin();
    for (std::size_t w = 0; w < vocab_size_; ++w) {
      std::uint64_t c = 0;
      if (it != counts.next.end() && it->first == w) c = (it++)->second;
      out[w] += lambda * ((static_cast<double>(c) + k_) / denom);
    }
  }
  for (auto& p : out) p = std::log(p);
}

bool NGramLM::operator==(const NGramLM& other) const {
  return vocab_size_ == other.vocab_size_ && direction_ == other.direction_ && weights_ == other.weights_ &&
         k_ == other.k_ && tables_ == other.tables_;
}

void NGramLM::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "order " << order() << '\n';
  out << "direction " << to_string(direction_) << '\n';
  out << "vocab_size " << vocab_size_ << '\n';
  out << "k " << hex(k_) << '\n';
  out << "weights";
  for (double w : weights_) out << ' ' << hex(w);
  out << '\n';
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    out << "table " << i + 1 << ' ' << tables_[i].size() << '\n';
    for (const auto& [ctx, counts] : tables_[i]) {
      for (auto t : ctx) out << t << ' ';
      out << "| " << counts.total << " |";
      for (const auto& [w, c] : counts.next) out << ' ' << w << ':' << c;
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

NGramLM NGramLM::load(const std::filesystem::path& path, std::size_t expected_vocab_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto fail = [&](const std::string& what) { throw FormatError(path.string() + ": " + what); };

  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != kMagic) fail("not an n-gram model file");
  if (version != kFormatVersion) fail("unsupported format version " + std::to_string(version));

  std::size_t order = 0, vocab_size = 0;
  std::string dir, k_text;
  if (!(in >> word >> order) || word != "order") fail("missing order");
  if (!(in >> word >> dir) || word != "direction") fail("missing direction");
  if (!(in >> word >> vocab_size) || word != "vocab_size") fail("missing vocab_size");
  if (!(in >> word >> k_text) || word != "k") fail("missing k");
  if (!(in >> word) || word != "weights") fail("missing weights");
  std::vector<double> weights(order);
  for (auto& w : weights) {
    std::string text;
    if (!(in >> text)) fail("truncated weights");
    w = parse_real(text);
  }
  const double k = parse_real(k_text);
  if (expected_vocab_size != 0 && vocab_size != expected_vocab_size)
    fail("model vocabulary size " + std::to_string(vocab_size) + " does not match " +
         std::to_string(expected_vocab_size));
  validate(vocab_size, weights, k);

  NGramLM lm(vocab_size, parse_direction(dir), std::move(weights), k);
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 1; i <= order; ++i) {
    std::size_t idx = 0, n_ctx = 0;
    if (!(in >> word >> idx >> n_ctx) || word != "table" || idx != i) fail("bad table header");
    std::getline(in, line);
    auto& table = lm.tables_[i - 1];
    for (std::size_t c = 0; c < n_ctx; ++c) {
      if (!std::getline(in, line)) fail("truncated table");
      std::istringstream row(line);
      TokenSeq ctx(i - 1);
      for (auto& t : ctx)
        if (!(row >> t)) fail("bad context");
      std::uint64_t total = 0;
      if (!(row >> word) || word != "|" || !(row >> total) || !(row >> word) || word != "|") fail("bad row");
      ContextCounts counts;
      counts.total = total;
      std::uint64_t sum = 0;
      while (row >> word) {
        const auto colon = word.find(':');
        if (colon == std::string::npos) fail("bad count entry");
        const auto w = static_cast<TokenId>(std::stoul(word.substr(0, colon)));
        const auto n = std::stoull(word.substr(colon + 1));
        if (w >= vocab_size) fail("token id out of range");
        counts.next[w] = n;
        sum += n;
      }
      if (sum != total) fail("row total does not match its counts");
      check_ids(ctx, vocab_size);
      table.emplace(std::move(ctx), std::move(counts));
    }
  }
  return lm;
}

}  // namespace bidi

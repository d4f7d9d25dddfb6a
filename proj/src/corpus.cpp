#include "bidi/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

namespace bidi {

namespace {

constexpr const char* kReservedSurfaces[kNumReserved] = {"<s>", "</s>", "<sep>", "<unk>"};

bool is_split_punct(char c) { return c == '.' || c == '!' || c == '?' || c == ',' || c == '\''; }

std::string error_at(const std::filesystem::path& path, std::size_t line, std::string_view what) {
  return path.string() + ":" + std::to_string(line) + ": " + std::string(what);
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::regular ? "regular" : "reverse"; }

Direction parse_direction(std::string_view s) {
  if (s == "regular") return Direction::regular;
  if (s == "reverse") return Direction::reverse;
  throw ParameterError("unknown direction '" + std::string(s) + "'");
}

CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "tsv") return CorpusFormat::tsv;
  if (s == "jsonl") return CorpusFormat::jsonl;
  throw ParameterError("unknown corpus format '" + std::string(s) + "'");
}

WordSeq tokenize(std::string_view line) {
  WordSeq out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char c : line) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      flush();
    } else if (is_split_punct(c)) {
      flush();
      out.emplace_back(1, c);
    } else {
      current.push_back(uc < 0x80 ? static_cast<char>(std::tolower(uc)) : c);
    }
  }
  flush();
  return out;
}

Vocabulary::Vocabulary() {
  for (const char* s : kReservedSurfaces) add(s);
}

void Vocabulary::add(std::string surface) {
  const auto id = static_cast<TokenId>(surfaces_.size());
  ids_.emplace(surface, id);
  surfaces_.push_back(std::move(surface));
}

Vocabulary Vocabulary::build(const std::vector<SurfacePair>& pairs, std::uint64_t min_count) {
  if (min_count < 1) throw ParameterError("min_count must be >= 1");
  if (pairs.empty()) throw ParameterError("cannot build a vocabulary from an empty corpus");

  std::map<std::string, std::uint64_t> freq;
  for (const auto& p : pairs) {
    for (const auto& w : p.source) ++freq[w];
    for (const auto& w : p.target) ++freq[w];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(), freq.end());
  // std::map iteration is already lexicographic, so a stable sort keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  Vocabulary v;
  for (auto& [surface, count] : ranked) {
    if (count < min_count) break;
    if (v.ids_.count(surface)) continue;  // a corpus word spelled like a marker
    v.add(surface);
  }
  return v;
}

TokenId Vocabulary::id(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::surface(TokenId id) const {
  if (id >= surfaces_.size()) throw std::out_of_range("token id " + std::to_string(id) + " out of range");
  return surfaces_[id];
}

bool Vocabulary::contains(std::string_view surface) const { return ids_.count(std::string(surface)) != 0; }

TokenSeq Vocabulary::encode(const WordSeq& words) const {
  TokenSeq out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(id(w));
  return out;
}

WordSeq Vocabulary::decode(const TokenSeq& ids) const {
  WordSeq out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(surface(i));
  return out;
}

SentencePair Vocabulary::encode(const SurfacePair& pair) const {
  return {encode(pair.source), encode(pair.target)};
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < surfaces_.size(); ++i) out << surfaces_[i] << '\t' << i << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  Vocabulary v;
  v.surfaces_.clear();
  v.ids_.clear();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw FormatError(error_at(path, lineno, "expected surface<TAB>id"));
    const std::string surface = line.substr(0, tab);
    std::size_t id = 0;
    try {
      id = std::stoul(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw FormatError(error_at(path, lineno, "bad id"));
    }
    if (id != v.surfaces_.size()) throw FormatError(error_at(path, lineno, "ids must be consecutive from 0"));
    if (id < kNumReserved && surface != kReservedSurfaces[id])
      throw FormatError(error_at(path, lineno, "reserved marker expected"));
    if (v.ids_.count(surface)) throw FormatError(error_at(path, lineno, "duplicate surface"));
    v.add(surface);
  }
  if (v.size() < kNumReserved) throw FormatError(path.string() + ": vocabulary shorter than the reserved markers");
  return v;
}

std::vector<SurfacePair> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<SurfacePair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string source, target;
    if (format == CorpusFormat::tsv) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
        throw FormatError(error_at(path, lineno, "expected exactly one TAB"));
      source = line.substr(0, tab);
      target = line.substr(tab + 1);
    } else {
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        throw FormatError(error_at(path, lineno, "invalid JSON"));
      }
      if (!rec.is_object() || rec.size() != 2 || !rec.contains("source") || !rec.contains("target") ||
          !rec["source"].is_string() || !rec["target"].is_string())
        throw FormatError(error_at(path, lineno, "expected {\"source\": ..., \"target\": ...}"));
      source = rec["source"].get<std::string>();
      target = rec["target"].get<std::string>();
    }
    SurfacePair p{tokenize(source), tokenize(target)};
    if (p.source.empty() || p.target.empty()) throw FormatError(error_at(path, lineno, "empty side"));
    pairs.push_back(std::move(p));
  }
  if (pairs.empty()) throw FormatError(path.string() + ": empty corpus");
  return pairs;
}

SplitSizes split_sizes(std::size_t n, const SplitFractions& f) {
  if (f.train < 0 || f.validation < 0 || f.test < 0 || std::abs(f.train + f.validation + f.test - 1.0) > 1e-9)
    throw ParameterError("split fractions must be non-negative and sum to 1");
  SplitSizes s;
  s.validation = static_cast<std::size_t>(std::llround(f.validation * static_cast<double>(n)));
  s.test = static_cast<std::size_t>(std::llround(f.test * static_cast<double>(n)));
  if (s.validation + s.test > n) s.test = n - std::min(n, s.validation);
  s.train = n - s.validation - s.test;
  return s;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

TokenSeq strip_eos(const TokenSeq& tokens) {
  auto it = std::find(tokens.begin(), tokens.end(), kEos);
  return TokenSeq(tokens.begin(), it);
}

}  // namespace bidi

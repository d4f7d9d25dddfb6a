#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "bidi/corpus.hpp"

using namespace bidi;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("bidi_corpus_test_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("I like cats !") == WordSeq{"i", "like", "cats", "!"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t ").empty());
  // Splitting rule applied by hand: don ' t stop .
  CHECK(tokenize("Don't stop.") == WordSeq{"don", "'", "t", "stop", "."});
  CHECK(tokenize("Yes,no?!") == WordSeq{"yes", ",", "no", "?", "!"});
}

TEST_CASE("reverse_target") {
  CHECK(reverse_target(WordSeq{"i", "like", "cats", "!"}) == WordSeq{"!", "cats", "like", "i"});
  CHECK(reverse_target(WordSeq{}).empty());
  CHECK(reverse_target(WordSeq{"a"}) == WordSeq{"a"});

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    TokenSeq y(rng() % 12);
    for (auto& t : y) t = static_cast<TokenId>(rng() % 50);
    CHECK(reverse_target(reverse_target(y)) == y);
  }
}

TEST_CASE("build_vocabulary") {
  SUBCASE("frequency order") {
    // "a" appears twice, "b" once.
    auto v = Vocabulary::build({{{"a", "b"}, {"a"}}}, 1);
    CHECK(v.size() == 6);
    CHECK(v.id("a") == 4);
    CHECK(v.id("b") == 5);
    CHECK(v.surface(kBos) == "<s>");
    CHECK(v.surface(kEos) == "</s>");
    CHECK(v.surface(kSep) == "<sep>");
    CHECK(v.surface(kUnk) == "<unk>");
  }
  SUBCASE("everything rare") {
    auto v = Vocabulary::build({{{"a", "b"}, {"a"}}}, std::numeric_limits<std::uint64_t>::max());
    CHECK(v.size() == kNumReserved);
    CHECK(v.id("a") == kUnk);
  }
  SUBCASE("lexicographic tie-break") {
    auto v = Vocabulary::build({{{"y"}, {"x"}}}, 1);
    CHECK(v.id("x") < v.id("y"));
  }
  SUBCASE("unknown surface maps to UNK") {
    auto v = Vocabulary::build({{{"y"}, {"x"}}}, 1);
    CHECK(v.id("zebra") == kUnk);
  }
  SUBCASE("min_count must be positive") {
    CHECK_THROWS_AS(Vocabulary::build({{{"y"}, {"x"}}}, 0), ParameterError);
  }
  SUBCASE("round trip through ids and the file format") {
    auto v = Vocabulary::build({{tokenize("the cat sat on the mat ."), tokenize("a dog , too !")}}, 1);
    for (TokenId id = 0; id < v.size(); ++id) CHECK(v.id(v.surface(id)) == id);
    auto path = std::filesystem::temp_directory_path() / "bidi_vocab_roundtrip.tsv";
    v.save(path);
    CHECK(Vocabulary::load(path) == v);
  }
}

TEST_CASE("load_corpus") {
  SUBCASE("single tsv line") {
    auto pairs = load_corpus(write_temp("one.tsv", "hello\thi there\n"), CorpusFormat::tsv);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].source == WordSeq{"hello"});
    CHECK(pairs[0].target == WordSeq{"hi", "there"});
  }
  SUBCASE("missing tab names line 1") {
    try {
      load_corpus(write_temp("bad.tsv", "hello hi there\n"), CorpusFormat::tsv);
      FAIL("expected an error");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    }
  }
  SUBCASE("file order, deterministic") {
    auto path = write_temp("three.tsv", "a\tb\nc\td\ne\tf\n");
    auto first = load_corpus(path, CorpusFormat::tsv);
    REQUIRE(first.size() == 3);
    CHECK(first[0].source == WordSeq{"a"});
    CHECK(first[2].target == WordSeq{"f"});
    CHECK(load_corpus(path, CorpusFormat::tsv) == first);
  }
  SUBCASE("empty file") {
    CHECK_THROWS_AS(load_corpus(write_temp("empty.tsv", ""), CorpusFormat::tsv), FormatError);
  }
  SUBCASE("jsonl") {
    auto pairs = load_corpus(write_temp("c.jsonl", "{\"source\": \"What?\", \"target\": \"Cats!\"}\n"),
                             CorpusFormat::jsonl);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].source == WordSeq{"what", "?"});
    CHECK(pairs[0].target == WordSeq{"cats", "!"});
    CHECK_THROWS_AS(load_corpus(write_temp("bad.jsonl", "{\"source\": \"x\"}\n"), CorpusFormat::jsonl),
                    FormatError);
  }
}

TEST_CASE("split_corpus") {
  std::vector<int> items(1000);
  std::iota(items.begin(), items.end(), 0);
  const SplitFractions f{0.97, 0.01, 0.02};
  auto a = split_corpus(items, f, 42);
  auto b = split_corpus(items, f, 42);
  CHECK(a.train == b.train);
  CHECK(a.validation == b.validation);
  CHECK(a.test == b.test);
  CHECK(std::llabs(static_cast<long long>(a.validation.size()) - 10) <= 1);
  CHECK(std::llabs(static_cast<long long>(a.test.size()) - 20) <= 1);
  CHECK(std::llabs(static_cast<long long>(a.train.size()) - 970) <= 1);

  std::vector<int> all = a.train;
  all.insert(all.end(), a.validation.begin(), a.validation.end());
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  CHECK(all == items);

  auto c = split_corpus(items, f, 43);
  CHECK(c.test != a.test);
  CHECK_THROWS_AS(split_sizes(10, {0.5, 0.5, 0.5}), ParameterError);
}

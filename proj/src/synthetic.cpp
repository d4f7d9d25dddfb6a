#include "bidi/synthetic.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>

namespace bidi::synthetic {

namespace {

struct Category {
  const char* name;
  std::vector<std::string> words;
};

const std::vector<Category>& categories() {
  static const std::vector<Category> cats = {
      {"animal", {"cats", "dogs", "birds", "horses", "rabbits", "fish"}},
      {"food", {"pizza", "pasta", "apples", "bread", "cheese", "soup"}},
      {"color", {"red", "blue", "green", "yellow", "black", "white"}},
      {"place", {"paris", "london", "school", "home", "beach", "park"}},
      {"activity", {"swimming", "reading", "running", "cooking", "dancing", "singing"}},
  };
  return cats;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

const std::vector<std::string>& cat_words(std::size_t c) { return categories()[c].words; }

std::pair<std::string, std::string> make_pair(Rng& rng) {
  const auto& animals = cat_words(0);
  const auto& foods = cat_words(1);
  const auto& colors = cat_words(2);
  const auto& places = cat_words(3);
  const auto& activities = cat_words(4);
  switch (rng.below(8)) {
    case 0: {
      const auto& x = rng.below(2) ? rng.pick(animals) : rng.pick(foods);
      static const std::vector<std::string> forms = {"yes , i like %s .", "yes , %s are great !",
                                                     "no , i do not like %s .", "i love %s !"};
      char buf[128];
      std::snprintf(buf, sizeof buf, rng.pick(forms).c_str(), x.c_str());
      return {"do you like " + x, buf};
    }
    case 1: {
      const std::size_t c = rng.below(2);
      const auto& x = rng.pick(cat_words(c));
      return {"what do you like ?", rng.below(2) ? "i like " + x + " !" : "i really like " + x + " ."};
    }
    case 2: {
      const auto& p = rng.pick(places);
      return {"where are you going ?", rng.below(3) ? "i am going to " + p + " ." : "to " + p + " !"};
    }
    case 3: {
      const auto& a = rng.pick(animals);
      const auto& c = rng.pick(colors);
      return {"what color are the " + a, rng.below(2) ? "the " + a + " are " + c + " ." : "they are " + c + " !"};
    }
    case 4: {
      const std::size_t c = rng.below(5);
      const auto& x = rng.pick(cat_words(c));
      return {std::string("what is your favorite ") + categories()[c].name + " ?",
              std::string("my favorite ") + categories()[c].name + " is " + x + " ."};
    }
    case 5: {
      const auto& a = rng.pick(activities);
      static const std::vector<std::string> answers = {"sure , i love %s !", "no , i am tired .",
                                                       "yes , %s is fun .", "maybe later ."};
      char buf[128];
      std::snprintf(buf, sizeof buf, rng.pick(answers).c_str(), a.c_str());
      return {"do you want to go " + a, buf};
    }
    case 6: {
      const auto& p = rng.pick(places);
      return {"how was " + p, rng.below(2) ? p + " was great !" : "it was fun , thanks ."};
    }
    default: {
      const auto& f = rng.pick(foods);
      return {"are you hungry ?", rng.below(2) ? "yes , i want " + f + " ." : "no , i ate " + f + " ."};
    }
  }
}

std::vector<std::string> function_words() {
  return {"yes", "no", "i", "like", "do", "not", "love", "are", "great", "really", "am", "going", "to",
          "what", "you", "where", "the", "they", "color", "is", "my", "favorite", "your", "sure", "tired",
          "fun", "maybe", "later", "want", "go", "how", "was", "it", "thanks", "hungry", "ate", "animal",
          "food", "place", "activity", ".", "!", "?", ","};
}

}  // namespace

std::vector<std::pair<std::string, std::string>> dialogue_corpus(std::size_t pairs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) out.push_back(make_pair(rng));
  return out;
}

EmbeddingTable embeddings(std::size_t dimension, std::uint64_t seed) {
  Rng rng(seed ^ 0x5eedULL);
  EmbeddingTable table(dimension);
  std::vector<double> v(dimension);
  for (std::size_t c = 0; c < categories().size(); ++c) {
    std::vector<double> centroid(dimension);
    for (auto& x : centroid) x = 4.0 * rng.unit() - 2.0;
    for (const auto& w : cat_words(c)) {
      for (std::size_t k = 0; k < dimension; ++k) v[k] = centroid[k] + 0.6 * (rng.unit() - 0.5);
      table.add(w, v);
    }
  }
  for (const auto& w : function_words()) {
    for (auto& x : v) x = 0.8 * (rng.unit() - 0.5);
    table.add(w, v);
  }
  return table;
}

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its",
    "itself", "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom",
    "this", "that", "these", "those", "am", "is", "are", "was", "were", "be", "been", "being",
    "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but",
    "if", "or", "because", "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after", "above", "below", "to",
    "from", "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then",
    "once", "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few",
    "more", "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
    "than", "too", "very", "s", "t", "can", "will", "just", "don", "should", "now", "d", "ll", "m",
    "o", "re", "ve", "y",
  };
  return words;
}

void write_corpus_tsv(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [s, t] : pairs) out << s << '\t' << t << '\n';
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << table.size() << ' ' << table.dimension() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << table.word(r);
    for (double x : table.vector(r)) {
      std::snprintf(buf, sizeof buf, " %.17g", x);
      out << buf;
    }
    out << '\n';
  }
}

void write_stopwords(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& w : default_stopwords()) out << w << '\n';
}

}  // namespace bidi::synthetic

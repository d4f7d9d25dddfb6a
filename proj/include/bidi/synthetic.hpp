#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bidi/corpus.hpp"
#include "bidi/similarity.hpp"

namespace bidi::synthetic {

// Templated question/answer dialogue pairs over a few word categories
// (animals, foods, colors, places, activities). Deterministic in `seed`
// across platforms: only raw mt19937_64 output is used.
std::vector<std::pair<std::string, std::string>> dialogue_corpus(std::size_t pairs, std::uint64_t seed);

// Vectors for every word the generator can emit: words of one category
// cluster around a shared centroid, function words sit near the origin.
EmbeddingTable embeddings(std::size_t dimension, std::uint64_t seed);

// The stopword list shipped in data/stopwords_en.txt.
const std::vector<std::string>& default_stopwords();

void write_corpus_tsv(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& pairs);
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);
void write_stopwords(const std::filesystem::path& path);

}  // namespace bidi::synthetic

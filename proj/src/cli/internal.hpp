#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bidi/bidi.hpp"
#include "bidi/cli.hpp"
#include "bidi/eval.hpp"

namespace bidi::cli {

// ---- formatting / parsing of list-valued options

std::string format_real(double x);
std::string format_reals(const std::vector<double>& v);
std::string format_sizes(const std::vector<std::size_t>& v);
std::string format_algorithms(const std::vector<Algorithm>& v);
std::string join_words(const WordSeq& words);
WordSeq split_words(const std::string& line);

// Reads a flat key=value file ('#' starts a comment line).
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

// ---- data and models

struct Dataset {
  std::vector<SurfacePair> pairs;
  CorpusSplit<SurfacePair> split;
};

Dataset load_dataset(const RunConfig& config);

struct Models {
  Vocabulary vocab;
  std::unique_ptr<NGramLM> regular;
  std::unique_ptr<NGramLM> reverse;
};

inline const char* kVocabFile = "vocab.txt";
inline const char* kRegularFile = "regular.lm";
inline const char* kReverseFile = "reverse.lm";

// Loads a model directory and checks it was trained on the same split.
Models load_models(const RunConfig& config);

// ---- decoding

struct Instance {
  SurfacePair surface;
  SentencePair ids;
};

std::vector<Instance> encode_instances(const std::vector<SurfacePair>& pairs, const Vocabulary& vocab);

struct InstanceResult {
  DecodeOutput output;
  ComplexityReport report;
  std::size_t oov_dropped = 0;
};

struct DecodeJob {
  Algorithm algorithm = Algorithm::vbs;
  SearchParams search;
  double lambda = 1.0;
  SimilaritySpec measure;  // bidia only
};

// Decodes every instance, up to `jobs` at a time; results are in input order.
std::vector<InstanceResult> decode_all(const Models& models, const std::vector<Instance>& instances,
                                       const DecodeJob& job, std::size_t jobs);

struct LambdaChoice {
  double lambda = 1.0;
  std::string source;  // "flag", "validation" or "default"
  std::vector<double> validation_bleu4;  // parallel to the grid; empty unless validated
};

// Argmax of validation BLEU-4 over the grid, ties to the smallest lambda.
LambdaChoice select_lambda(const RunConfig& config, const Models& models, const std::vector<Instance>& validation,
                           const SearchParams& search);

// Builds the similarity spec for a bidia algorithm (loads embeddings for wmd).
SimilaritySpec make_measure(const RunConfig& config, Algorithm algorithm, const Vocabulary& vocab);

struct SetScores {
  double bleu4 = 0.0;
  double distinct1 = 0.0;
  double distinct2 = 0.0;
};

SetScores score_outputs(const std::vector<Instance>& instances, const std::vector<InstanceResult>& results);

// Writes decodes.csv, complexity.csv and (optionally) beams.csv into `dir`.
void write_run_outputs(const std::filesystem::path& dir, const RunConfig& config, const Models& models,
                       const std::vector<Instance>& instances, const std::vector<InstanceResult>& results);

// ---- commands

int cmd_train(const RunConfig& config);
int cmd_decode(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_analyze(const RunConfig& config);
int cmd_corpus_stats(const RunConfig& config);
int cmd_synth(const RunConfig& config);

}  // namespace bidi::cli

#pragma once

// Command-line front end: train, decode, sweep, analyze, corpus-stats and
// synth. `run` is the whole program minus process setup, so tests can drive
// it in-process.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidi/beam.hpp"
#include "bidi/corpus.hpp"
#include "bidi/instrumentation.hpp"
#include "bidi/lm.hpp"
#include "bidi/similarity.hpp"

namespace bidi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Invalid or inconsistent configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;

  std::filesystem::path corpus;
  CorpusFormat format = CorpusFormat::tsv;
  SplitFractions split;
  std::uint64_t seed = 1;
  std::uint64_t min_count = 1;

  NGramOptions lm;
  SearchParams search;

  Algorithm algorithm = Algorithm::vbs;
  std::vector<Algorithm> algorithms = {Algorithm::vbs, Algorithm::bidis, Algorithm::bidia_bleu, Algorithm::bidia_wmd};
  std::vector<std::size_t> beam_sizes = {2, 4, 8, 16};
  std::vector<double> lambda_grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  std::optional<double> lambda;  // fixed lambda; skips validation

  std::vector<double> sim_weights = {0.25, 0.25, 0.25, 0.25};
  BpMode bp_mode = BpMode::divide;
  std::filesystem::path embeddings;
  std::filesystem::path stopwords;  // empty: built-in English list

  std::filesystem::path models;
  std::filesystem::path input;
  std::filesystem::path out;
  std::size_t jobs = 1;
  bool persist_beams = false;
  bool timing = false;

  std::size_t synth_pairs = 500;
  std::size_t synth_dim = 8;

  // Throws ConfigError (or ParameterError) on anything that would fail later.
  void validate() const;
};

// Flat key=value text using the long option names; feeding it back with
// --config reproduces the run.
std::string resolved_config_text(const RunConfig& config);
void write_resolved_config(const std::filesystem::path& dir, const RunConfig& config);

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace bidi::cli

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bidi/csv.hpp"
#include "internal.hpp"

namespace bidi::cli {

namespace {

bool needs(const std::string& command, std::initializer_list<const char*> commands) {
  return std::any_of(commands.begin(), commands.end(), [&](const char* c) { return command == c; });
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_distribution(const std::vector<double>& w, const std::string& name) {
  require(!w.empty(), name + " must not be empty");
  double sum = 0.0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0, name + " entries must be finite and non-negative");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= 1e-9, name + " must sum to 1 (got " + format_real(sum) + ")");
}

}  // namespace

std::string format_real(double x) { return csv::real(x); }

std::string format_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
  return s;
}

std::string format_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string format_algorithms(const std::vector<Algorithm>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::string(to_string(v[i]));
  return s;
}

std::string join_words(const WordSeq& words) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) s += (i ? " " : "") + words[i];
  return s;
}

WordSeq split_words(const std::string& line) {
  WordSeq out;
  std::istringstream in(line);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(path.string() + ":" + std::to_string(n) + ": expected key=value");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

void RunConfig::validate() const {
  const bool uses_corpus = needs(command, {"train", "decode", "sweep", "analyze", "corpus-stats"});
  if (uses_corpus) require(!corpus.empty(), command + ": --corpus is required");
  if (needs(command, {"decode", "sweep"})) require(!models.empty(), command + ": --models is required");
  if (needs(command, {"train", "decode", "sweep", "analyze", "synth"})) require(!out.empty(), command + ": --out is required");
  if (command == "analyze") require(!input.empty(), "analyze: --input is required");
  require(jobs >= 1, "--jobs must be >= 1");

  if (uses_corpus) {
    check_distribution({split.train, split.validation, split.test}, "--split");
  }
  if (command == "train") {
    require(min_count >= 1, "--min-count must be >= 1");
    require(lm.order >= 1, "--order must be >= 1");
    require(lm.weights.size() == lm.order, "--lm-weights needs exactly --order entries");
    check_distribution(lm.weights, "--lm-weights");
    require(std::isfinite(lm.k) && lm.k > 0.0, "--lm-k must be > 0");
  }
  if (command == "synth") {
    require(synth_pairs >= 1, "--pairs must be >= 1");
    require(synth_dim >= 1, "--dim must be >= 1");
  }

  if (!needs(command, {"decode", "sweep"})) return;

  std::vector<Algorithm> algs;
  std::vector<std::size_t> sizes;
  if (command == "decode") {
    algs = {algorithm};
    sizes = {search.B};
  } else {
    require(!algorithms.empty(), "--algorithms must not be empty");
    require(std::set<Algorithm>(algorithms.begin(), algorithms.end()).size() == algorithms.size(),
            "--algorithms lists an algorithm twice");
    require(!beam_sizes.empty(), "--beam-sizes must not be empty");
    algs = algorithms;
    sizes = beam_sizes;
  }
  for (auto nb : sizes) {
    SearchParams p = search;
    p.B = nb;
    p.validate();
  }
  for (auto a : algs) {
    if (is_bidia(a)) {
      for (auto nb : sizes)
        require(nb >= 2 && nb % 2 == 0, std::string(to_string(a)) + " splits the beam between two directions, so B = " +
                                            std::to_string(nb) + " must be even and >= 2");
      SimilaritySpec spec;
      spec.T = search.T;
      spec.weights = sim_weights;
      spec.bp_mode = bp_mode;
      spec.validate();
    }
    if (a == Algorithm::bidia_wmd) require(!embeddings.empty(), "bidia-wmd needs --embeddings");
    if (a == Algorithm::bidis && !lambda) {
      require(!lambda_grid.empty(), "--lambda-grid must not be empty");
      for (double l : lambda_grid) require(std::isfinite(l), "--lambda-grid entries must be finite");
    }
  }
  if (lambda) require(std::isfinite(*lambda), "--lambda must be finite");
}

std::string resolved_config_text(const RunConfig& c) {
  std::ostringstream os;
  auto put = [&](const char* key, const std::string& value) { os << key << '=' << value << '\n'; };
  auto put_path = [&](const char* key, const std::filesystem::path& p) {
    if (!p.empty()) put(key, p.generic_string());
  };
  os << "# bidibeam " << c.command << '\n';
  put_path("corpus", c.corpus);
  put("format", c.format == CorpusFormat::tsv ? "tsv" : "jsonl");
  put("split", format_reals({c.split.train, c.split.validation, c.split.test}));
  put("seed", std::to_string(c.seed));
  put("min-count", std::to_string(c.min_count));
  put("order", std::to_string(c.lm.order));
  put("lm-weights", format_reals(c.lm.weights));
  put("lm-k", format_real(c.lm.k));
  put("B", std::to_string(c.search.B));
  put("T", std::to_string(c.search.T));
  put("alpha", format_real(c.search.alpha));
  put("algorithm", std::string(to_string(c.algorithm)));
  put("algorithms", format_algorithms(c.algorithms));
  put("beam-sizes", format_sizes(c.beam_sizes));
  put("lambda-grid", format_reals(c.lambda_grid));
  if (c.lambda) put("lambda", format_real(*c.lambda));
  put("sim-weights", format_reals(c.sim_weights));
  put("bp-mode", std::string(to_string(c.bp_mode)));
  put_path("embeddings", c.embeddings);
  put_path("stopwords", c.stopwords);
  put_path("models", c.models);
  put_path("input", c.input);
  put_path("out", c.out);
  put("jobs", std::to_string(c.jobs));
  put("persist-beams", c.persist_beams ? "true" : "false");
  put("timing", c.timing ? "true" : "false");
  put("pairs", std::to_string(c.synth_pairs));
  put("dim", std::to_string(c.synth_dim));
  return os.str();
}

void write_resolved_config(const std::filesystem::path& dir, const RunConfig& config) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "resolved_config.txt", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "resolved_config.txt").string());
  out << resolved_config_text(config);
}

}  // namespace bidi::cli

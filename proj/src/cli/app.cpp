#include <CLI11.hpp>
#include <iostream>

#include "internal.hpp"

namespace bidi::cli {

namespace {

// Raw option values as CLI11 sees them; converted into a RunConfig after
// parsing so that config-file and command-line values go through one path.
struct RawOptions {
  std::string corpus, format = "tsv", models, input, out, embeddings, stopwords;
  std::vector<double> split = {0.97, 0.01, 0.02};
  std::uint64_t seed = 1, min_count = 1;
  std::size_t order = 3;
  std::vector<double> lm_weights;
  double lm_k = 0.1;
  std::size_t B = 4, T = 20;
  double alpha = 0.6;
  std::string algorithm = "vbs";
  std::vector<std::string> algorithms = {"vbs", "bidis", "bidia-bleu", "bidia-wmd"};
  std::vector<std::size_t> beam_sizes = {2, 4, 8, 16};
  std::vector<double> lambda_grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  double lambda = 1.0;
  std::vector<double> sim_weights = {0.25, 0.25, 0.25, 0.25};
  std::string bp_mode = "divide";
  std::size_t jobs = 1;
  bool persist_beams = false, timing = false;
  std::size_t pairs = 500, dim = 8;
};

const std::vector<std::string> kAlgorithmNames = {"vbs", "bidis", "bidia-bleu", "bidia-wmd"};

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Bidirectional beam search decoding experiments"};
  app.name("bidibeam");
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  RawOptions o;
  CLI::Option* lambda_opt = nullptr;
  {
    auto* g = &app;
    g->add_option("--corpus", o.corpus, "dialogue corpus: source<TAB>target lines, or JSON lines");
    g->add_option("--format", o.format, "corpus format")->check(CLI::IsMember({"tsv", "jsonl"}));
    g->add_option("--split", o.split, "train,validation,test fractions")->delimiter(',')->expected(3);
    g->add_option("--seed", o.seed, "seed for the split and synthetic data");
    g->add_option("--min-count", o.min_count, "rarer training words map to <unk>");
    g->add_option("--order", o.order, "n-gram order");
    g->add_option("--lm-weights", o.lm_weights,
                  "interpolation weights, lowest order first (default 0.2,0.3,0.5 for order 3, else uniform)")
        ->delimiter(',');
    g->add_option("--lm-k", o.lm_k, "additive smoothing constant");
    g->add_option("--B", o.B, "beam size (bidia: total over both directions)");
    g->add_option("--T", o.T, "maximum output length, end marker included");
    g->add_option("--alpha", o.alpha, "length-penalty exponent");
    g->add_option("--algorithm", o.algorithm, "decoder for `decode`")->check(CLI::IsMember(kAlgorithmNames));
    g->add_option("--algorithms", o.algorithms, "decoders for `sweep`")
        ->delimiter(',')
        ->check(CLI::IsMember(kAlgorithmNames));
    g->add_option("--beam-sizes", o.beam_sizes, "N_B values for `sweep`")->delimiter(',');
    g->add_option("--lambda-grid", o.lambda_grid, "bidis weights tried on the validation split")->delimiter(',');
    lambda_opt = g->add_option("--lambda", o.lambda, "fixed bidis weight; skips validation");
    g->add_option("--sim-weights", o.sim_weights, "n-gram weights of the agreement BLEU")->delimiter(',');
    g->add_option("--bp-mode", o.bp_mode, "how the brevity penalty enters the WMD dissimilarity")
        ->check(CLI::IsMember({"divide", "multiply"}));
    g->add_option("--embeddings", o.embeddings, "word vectors (text format), required by bidia-wmd");
    g->add_option("--stopwords", o.stopwords, "one word per line (default: built-in English list)");
    g->add_option("--models", o.models, "directory written by `train`");
    g->add_option("--input", o.input, "decode or sweep output directory for `analyze`");
    g->add_option("--out", o.out, "output directory");
    g->add_option("--jobs", o.jobs, "test sentences decoded concurrently");
    g->add_flag("--persist-beams", o.persist_beams, "also write every beam (needed by `analyze`)");
    g->add_flag("--timing", o.timing, "add wall time to complexity.csv (makes it non-reproducible)");
    g->add_option("--pairs", o.pairs, "pairs generated by `synth`");
    g->add_option("--dim", o.dim, "embedding dimension for `synth`");
  }
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"train", "train the regular and reverse models"},
      {"decode", "decode the test split with one algorithm"},
      {"sweep", "decode the test split for every algorithm and beam size"},
      {"analyze", "rank histogram, best-hypothesis oracle and word-position tables"},
      {"corpus-stats", "corpus and split statistics"},
      {"synth", "write a synthetic dialogue corpus with embeddings and stopwords"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  RunConfig c;
  try {
    c.command = app.get_subcommands().front()->get_name();
    c.corpus = o.corpus;
    c.format = parse_corpus_format(o.format);
    c.split = {o.split[0], o.split[1], o.split[2]};
    c.seed = o.seed;
    c.min_count = o.min_count;
    c.lm.order = o.order;
    c.lm.k = o.lm_k;
    if (!o.lm_weights.empty())
      c.lm.weights = o.lm_weights;
    else if (o.order != 3)
      c.lm.weights.assign(o.order, 1.0 / static_cast<double>(o.order));
    c.search.B = o.B;
    c.search.T = o.T;
    c.search.alpha = o.alpha;
    c.algorithm = parse_algorithm(o.algorithm);
    c.algorithms.clear();
    for (const auto& a : o.algorithms) c.algorithms.push_back(parse_algorithm(a));
    c.beam_sizes = o.beam_sizes;
    c.lambda_grid = o.lambda_grid;
    if (lambda_opt->count() > 0) c.lambda = o.lambda;
    c.sim_weights = o.sim_weights;
    c.bp_mode = parse_bp_mode(o.bp_mode);
    c.embeddings = o.embeddings;
    c.stopwords = o.stopwords;
    c.models = o.models;
    c.input = o.input;
    c.out = o.out;
    c.jobs = o.jobs;
    c.persist_beams = o.persist_beams;
    c.timing = o.timing;
    c.synth_pairs = o.pairs;
    c.synth_dim = o.dim;
    c.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c.command == "train") return cmd_train(c);
    if (c.command == "decode") return cmd_decode(c);
    if (c.command == "sweep") return cmd_sweep(c);
    if (c.command == "analyze") return cmd_analyze(c);
    if (c.command == "corpus-stats") return cmd_corpus_stats(c);
    return cmd_synth(c);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"bidibeam"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace bidi::cli

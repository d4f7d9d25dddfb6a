#include <exception>
#include <fstream>
#include <iostream>

#include "bidi/csv.hpp"
#include "bidi/synthetic.hpp"
#include "internal.hpp"

namespace bidi::cli {

Dataset load_dataset(const RunConfig& config) {
  Dataset d;
  d.pairs = load_corpus(config.corpus, config.format);
  d.split = split_corpus(d.pairs, config.split, config.seed);
  return d;
}

Models load_models(const RunConfig& config) {
  const auto& dir = config.models;
  const auto trained = read_key_values(dir / "resolved_config.txt");
  const std::string split = format_reals({config.split.train, config.split.validation, config.split.test});
  const auto mismatch = [&](const char* key, const std::string& ours) {
    auto it = trained.find(key);
    if (it != trained.end() && it->second != ours)
      throw ConfigError("models in " + dir.string() + " were trained with " + key + "=" + it->second + ", but this run uses " +
                        key + "=" + ours + "; the test split would differ");
  };
  mismatch("seed", std::to_string(config.seed));
  mismatch("split", split);

  Models m;
  m.vocab = Vocabulary::load(dir / kVocabFile);
  m.regular = std::make_unique<NGramLM>(NGramLM::load(dir / kRegularFile, m.vocab.size()));
  m.reverse = std::make_unique<NGramLM>(NGramLM::load(dir / kReverseFile, m.vocab.size()));
  if (m.regular->direction() != Direction::regular || m.reverse->direction() != Direction::reverse)
    throw FormatError(dir.string() + ": model directions do not match their file names");
  return m;
}

std::vector<Instance> encode_instances(const std::vector<SurfacePair>& pairs, const Vocabulary& vocab) {
  std::vector<Instance> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p, vocab.encode(p)});
  return out;
}

namespace {

InstanceResult decode_one(const Models& models, const Instance& inst, const DecodeJob& job,
                          const SearchParams& search) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t V = models.vocab.size();
  const auto& src = inst.ids.source;
  InstanceResult r;
  switch (job.algorithm) {
    case Algorithm::vbs:
      r.output = vbs_decode(*models.regular, src, search);
      r.report = make_report(Algorithm::vbs, search, V, r.output);
      break;
    case Algorithm::bidis: {
      auto res = bidis_decode(*models.regular, *models.reverse, src, BidiSParams{job.lambda, search});
      r.report = make_report(search, V, res);
      r.output = std::move(res.output);
      break;
    }
    case Algorithm::bidia_bleu:
    case Algorithm::bidia_wmd: {
      auto res = bidia_decode(*models.regular, *models.reverse, src, search, job.measure);
      r.report = make_report(job.algorithm, search, V, res);
      r.oov_dropped = res.oov_dropped;
      r.output = std::move(res.output);
      break;
    }
  }
  r.report.wall_time =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return r;
}

}  // namespace

std::vector<InstanceResult> decode_all(const Models& models, const std::vector<Instance>& instances,
                                       const DecodeJob& job, std::size_t jobs) {
  std::vector<InstanceResult> results(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
  SearchParams search = job.search;
  // With several instances in flight the per-step kernels run serially;
  // otherwise they get the threads.
  if (jobs > 1) search.execution = Execution::serial;
  const auto n = static_cast<long long>(instances.size());
#pragma omp parallel for num_threads(static_cast<int>(jobs)) schedule(dynamic, 1) if (jobs > 1)
  for (long long i = 0; i < n; ++i) {
    try {
      results[i] = decode_one(models, instances[i], job, search);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::size_t oov = 0;
  for (const auto& r : results) oov += r.oov_dropped;
  if (oov > 0)
    std::cerr << "warning: " << oov << " out-of-vocabulary word occurrence(s) dropped before WMD\n";
  return results;
}

LambdaChoice select_lambda(const RunConfig& config, const Models& models, const std::vector<Instance>& validation,
                           const SearchParams& search) {
  if (config.lambda) return {*config.lambda, "flag", {}};
  if (validation.empty()) return {1.0, "default", {}};
  DecodeJob job;
  job.algorithm = Algorithm::vbs;
  job.search = search;
  const auto runs = decode_all(models, validation, job, config.jobs);
  LambdaChoice choice;
  choice.source = "validation";
  double best = 0.0;
  for (std::size_t g = 0; g < config.lambda_grid.size(); ++g) {
    const double lambda = config.lambda_grid[g];
    BleuAccumulator acc;
    for (std::size_t i = 0; i < validation.size(); ++i) {
      const auto res = bidis_rescore(runs[i].output, *models.reverse, validation[i].ids.source, lambda, search.alpha);
      acc.add(strip_eos(res.output.selected.tokens), validation[i].ids.target);
    }
    const double bleu = acc.score();
    choice.validation_bleu4.push_back(bleu);
    if (g == 0 || bleu > best || (bleu == best && lambda < choice.lambda)) {
      best = bleu;
      choice.lambda = lambda;
    }
  }
  return choice;
}

SimilaritySpec make_measure(const RunConfig& config, Algorithm algorithm, const Vocabulary& vocab) {
  SimilaritySpec spec;
  spec.T = config.search.T;
  spec.weights = config.sim_weights;
  spec.bp_mode = config.bp_mode;
  if (algorithm == Algorithm::bidia_wmd) {
    spec.kind = SimilarityKind::wmd_t;
    auto table = std::make_shared<const EmbeddingTable>(EmbeddingTable::load(config.embeddings));
    StopwordSet stop;
    if (config.stopwords.empty()) {
      const auto& words = synthetic::default_stopwords();
      stop.insert(words.begin(), words.end());
    } else {
      stop = load_stopwords(config.stopwords);
    }
    spec.wmd = std::make_shared<const WmdContext>(vocab, std::move(table), std::move(stop));
  }
  spec.validate();
  return spec;
}

SetScores score_outputs(const std::vector<Instance>& instances, const std::vector<InstanceResult>& results) {
  SetScores s;
  if (instances.empty()) return s;
  BleuAccumulator acc;
  std::vector<TokenSeq> outputs;
  std::size_t words = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    outputs.push_back(strip_eos(results[i].output.selected.tokens));
    words += outputs.back().size();
    acc.add(outputs.back(), instances[i].ids.target);
  }
  s.bleu4 = acc.score();
  if (words > 0) {
    s.distinct1 = distinct_n(outputs, 1);
    s.distinct2 = distinct_n(outputs, 2);
  }
  return s;
}

void write_run_outputs(const std::filesystem::path& dir, const RunConfig& config, const Models& models,
                       const std::vector<Instance>& instances, const std::vector<InstanceResult>& results) {
  std::filesystem::create_directories(dir);
  const double alpha = config.search.alpha;
  const auto words = [&](const TokenSeq& ids) { return join_words(models.vocab.decode(strip_eos(ids))); };
  {
    csv::Writer w(dir / "decodes.csv", {"source", "reference", "output", "selected_index", "score", "expansions"});
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& out = results[i].output;
      w.row({join_words(instances[i].surface.source), words(instances[i].ids.target), words(out.selected.tokens),
             std::to_string(out.selected_index), format_real(normalized_score(out.selected, alpha)),
             std::to_string(results[i].report.expansions)});
    }
  }
  {
    std::ofstream out(dir / "complexity.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "complexity.csv").string());
    out << complexity_csv_header(config.timing) << '\n';
    for (const auto& r : results) out << complexity_csv_row(r.report, config.timing) << '\n';
  }
  if (config.persist_beams) {
    csv::Writer w(dir / "beams.csv", {"instance", "rank", "tokens", "logprob", "normalized_score", "finished"});
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& beam = results[i].output.beam;
      for (std::size_t r = 0; r < beam.size(); ++r)
        w.row({std::to_string(i + 1), std::to_string(r + 1), words(beam[r].tokens), format_real(beam[r].logprob),
               format_real(normalized_score(beam[r], alpha)), beam[r].finished ? "1" : "0"});
    }
  }
}

}  // namespace bidi::cli

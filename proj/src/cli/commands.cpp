#include <fstream>
#include <iostream>
#include <map>

#include "bidi/csv.hpp"
#include "bidi/synthetic.hpp"
#include "internal.hpp"

namespace bidi::cli {

namespace {

std::string cell_name(Algorithm a, std::size_t nb) { return std::string(to_string(a)) + "-nb" + std::to_string(nb); }

std::size_t output_beam_width(Algorithm a, std::size_t B) { return is_bidia(a) ? B / 2 : B; }

void print_scores(const std::string& label, const SetScores& s) {
  std::cout << label << ": bleu4=" << format_real(s.bleu4) << " distinct1=" << format_real(s.distinct1)
            << " distinct2=" << format_real(s.distinct2) << '\n';
}

}  // namespace

int cmd_train(const RunConfig& config) {
  const Dataset data = load_dataset(config);
  if (data.split.train.empty()) throw ConfigError("train: the training split is empty");
  const Vocabulary vocab = Vocabulary::build(data.split.train, config.min_count);
  std::vector<SentencePair> encoded;
  encoded.reserve(data.split.train.size());
  for (const auto& p : data.split.train) encoded.push_back(vocab.encode(p));
  const auto regular = NGramLM::train(encoded, vocab.size(), Direction::regular, config.lm);
  const auto reverse = NGramLM::train(encoded, vocab.size(), Direction::reverse, config.lm);

  std::filesystem::create_directories(config.out);
  vocab.save(config.out / kVocabFile);
  regular.save(config.out / kRegularFile);
  reverse.save(config.out / kReverseFile);
  write_resolved_config(config.out, config);
  std::cout << "trained regular and reverse models on " << encoded.size() << " pairs, vocabulary " << vocab.size()
            << " -> " << config.out.string() << '\n';
  return kExitOk;
}

int cmd_decode(const RunConfig& config) {
  const Dataset data = load_dataset(config);
  const Models models = load_models(config);
  const auto test = encode_instances(data.split.test, models.vocab);

  RunConfig resolved = config;
  DecodeJob job;
  job.algorithm = config.algorithm;
  job.search = config.search;
  std::filesystem::create_directories(config.out);
  if (config.algorithm == Algorithm::bidis) {
    const auto choice = select_lambda(config, models, encode_instances(data.split.validation, models.vocab),
                                      config.search);
    job.lambda = choice.lambda;
    resolved.lambda = choice.lambda;
    if (!choice.validation_bleu4.empty()) {
      csv::Writer w(config.out / "lambda_validation.csv", {"lambda", "validation_bleu4"});
      for (std::size_t g = 0; g < config.lambda_grid.size(); ++g)
        w.row({format_real(config.lambda_grid[g]), format_real(choice.validation_bleu4[g])});
    }
    std::cout << "lambda=" << format_real(choice.lambda) << " (" << choice.source << ")\n";
  }
  if (is_bidia(config.algorithm)) job.measure = make_measure(config, config.algorithm, models.vocab);

  const auto results = decode_all(models, test, job, config.jobs);
  write_run_outputs(config.out, resolved, models, test, results);
  write_resolved_config(config.out, resolved);
  print_scores(std::string(to_string(config.algorithm)) + " on " + std::to_string(test.size()) + " test pairs",
               score_outputs(test, results));
  return kExitOk;
}

int cmd_sweep(const RunConfig& config) {
  const Dataset data = load_dataset(config);
  const Models models = load_models(config);
  const auto test = encode_instances(data.split.test, models.vocab);
  const auto validation = encode_instances(data.split.validation, models.vocab);

  std::map<Algorithm, SimilaritySpec> measures;
  for (auto a : config.algorithms)
    if (is_bidia(a)) measures[a] = make_measure(config, a, models.vocab);
  const bool has_bidis =
      std::find(config.algorithms.begin(), config.algorithms.end(), Algorithm::bidis) != config.algorithms.end();

  std::filesystem::create_directories(config.out);
  csv::Writer sweep(config.out / "sweep.csv",
                    {"algorithm", "N_B", "beam_per_direction", "lambda", "bleu4", "distinct1", "distinct2"});
  std::unique_ptr<csv::Writer> lambdas;
  if (has_bidis && !config.lambda && !validation.empty())
    lambdas = std::make_unique<csv::Writer>(config.out / "lambda_validation.csv",
                                            std::vector<std::string>{"N_B", "lambda", "validation_bleu4"});

  for (auto nb : config.beam_sizes) {
    SearchParams search = config.search;
    search.B = nb;
    LambdaChoice choice;
    if (has_bidis) {
      choice = select_lambda(config, models, validation, search);
      for (std::size_t g = 0; g < choice.validation_bleu4.size(); ++g)
        lambdas->row({std::to_string(nb), format_real(config.lambda_grid[g]), format_real(choice.validation_bleu4[g])});
    }
    for (auto a : config.algorithms) {
      DecodeJob job;
      job.algorithm = a;
      job.search = search;
      job.lambda = choice.lambda;
      if (is_bidia(a)) job.measure = measures.at(a);
      const auto results = decode_all(models, test, job, config.jobs);

      RunConfig cell = config;
      cell.command = "decode";
      cell.algorithm = a;
      cell.search.B = nb;
      if (a == Algorithm::bidis) cell.lambda = choice.lambda;
      const auto dir = config.out / "cells" / cell_name(a, nb);
      cell.out = dir;
      write_run_outputs(dir, cell, models, test, results);
      write_resolved_config(dir, cell);

      const auto s = score_outputs(test, results);
      sweep.row({std::string(to_string(a)), std::to_string(nb), std::to_string(output_beam_width(a, nb)),
                 a == Algorithm::bidis ? format_real(choice.lambda) : "", format_real(s.bleu4),
                 format_real(s.distinct1), format_real(s.distinct2)});
      print_scores(cell_name(a, nb), s);
    }
  }
  write_resolved_config(config.out, config);
  return kExitOk;
}

int cmd_analyze(const RunConfig& config) {
  struct Cell {
    Algorithm algorithm;
    std::size_t B;
    std::filesystem::path dir;
  };
  std::vector<Cell> cells;
  const auto cell_from = [](const std::filesystem::path& dir) {
    const auto kv = read_key_values(dir / "resolved_config.txt");
    const auto get = [&](const char* key) {
      auto it = kv.find(key);
      if (it == kv.end()) throw FormatError((dir / "resolved_config.txt").string() + ": missing key " + key);
      return it->second;
    };
    return Cell{parse_algorithm(get("algorithm")), std::stoul(get("B")), dir};
  };
  if (std::filesystem::exists(config.input / "sweep.csv")) {
    const auto sweep = csv::read(config.input / "sweep.csv");
    const auto ca = sweep.column("algorithm"), cn = sweep.column("N_B");
    for (const auto& row : sweep.rows)
      cells.push_back(cell_from(config.input / "cells" / cell_name(parse_algorithm(row[ca]), std::stoul(row[cn]))));
  } else {
    cells.push_back(cell_from(config.input));
  }

  std::filesystem::create_directories(config.out);
  csv::Writer hist(config.out / "rank_histogram.csv", {"algorithm", "N_B", "rank", "count"});
  csv::Writer oracle(config.out / "oracle.csv", {"algorithm", "N_B", "algorithm_bleu4", "best_hypothesis_bleu4"});
  for (const auto& cell : cells) {
    const auto decodes = csv::read(cell.dir / "decodes.csv");
    const auto beams_path = cell.dir / "beams.csv";
    if (!std::filesystem::exists(beams_path))
      throw std::runtime_error("no persisted beams in " + cell.dir.string() +
                               "; rerun decode or sweep with --persist-beams");
    const auto beams = csv::read(beams_path);
    const std::size_t n = decodes.rows.size();

    std::vector<std::size_t> selected;
    const auto c_sel = decodes.column("selected_index");
    for (const auto& row : decodes.rows) selected.push_back(std::stoul(row[c_sel]));
    const auto h = rank_histogram(selected, output_beam_width(cell.algorithm, cell.B));
    for (std::size_t r = 0; r < h.counts.size(); ++r)
      hist.row({std::string(to_string(cell.algorithm)), std::to_string(cell.B), std::to_string(r + 1),
                std::to_string(h.counts[r])});

    std::vector<std::vector<WordSeq>> candidates(n);
    const auto c_inst = beams.column("instance"), c_tok = beams.column("tokens");
    for (const auto& row : beams.rows) {
      const std::size_t i = std::stoul(row[c_inst]);
      if (i < 1 || i > n) throw FormatError(beams_path.string() + ": instance " + row[c_inst] + " has no decode row");
      candidates[i - 1].push_back(split_words(row[c_tok]));
    }
    BleuAccumulator algorithm_acc, best_acc;
    const auto c_ref = decodes.column("reference"), c_out = decodes.column("output");
    for (std::size_t i = 0; i < n; ++i) {
      if (candidates[i].empty()) throw FormatError(beams_path.string() + ": no beam for instance " + std::to_string(i + 1));
      const WordSeq ref = split_words(decodes.rows[i][c_ref]);
      algorithm_acc.add(split_words(decodes.rows[i][c_out]), ref);
      best_acc.add(candidates[i][best_candidate_index(candidates[i], ref)], ref);
    }
    oracle.row({std::string(to_string(cell.algorithm)), std::to_string(cell.B),
                format_real(n ? algorithm_acc.score() : 0.0), format_real(n ? best_acc.score() : 0.0)});
  }

  const auto corpus = load_corpus(config.corpus, config.format);
  csv::Writer words(config.out / "word_position.csv", {"order", "position", "rank", "word", "count"});
  for (auto order : {Direction::regular, Direction::reverse})
    for (std::size_t pos = 1; pos <= 3; ++pos) {
      const auto top = word_position_frequency(corpus, pos, order, 50);
      for (std::size_t r = 0; r < top.size(); ++r)
        words.row({std::string(to_string(order)), std::to_string(pos), std::to_string(r + 1), top[r].first,
                   std::to_string(top[r].second)});
    }
  write_resolved_config(config.out, config);
  std::cout << "analyzed " << cells.size() << " run(s) -> " << config.out.string() << '\n';
  return kExitOk;
}

int cmd_corpus_stats(const RunConfig& config) {
  const Dataset data = load_dataset(config);
  const Vocabulary vocab = Vocabulary::build(data.split.train, config.min_count);
  std::size_t src_words = 0, tgt_words = 0;
  std::vector<WordSeq> targets;
  for (const auto& p : data.pairs) {
    src_words += p.source.size();
    tgt_words += p.target.size();
    targets.push_back(p.target);
  }
  const double n = static_cast<double>(data.pairs.size());
  const std::vector<std::pair<std::string, std::string>> stats = {
      {"pairs", std::to_string(data.pairs.size())},
      {"train_pairs", std::to_string(data.split.train.size())},
      {"validation_pairs", std::to_string(data.split.validation.size())},
      {"test_pairs", std::to_string(data.split.test.size())},
      {"vocabulary", std::to_string(vocab.size())},
      {"source_words_mean", format_real(static_cast<double>(src_words) / n)},
      {"target_words_mean", format_real(static_cast<double>(tgt_words) / n)},
      {"target_distinct1", format_real(tgt_words ? distinct_n(targets, 1) : 0.0)},
      {"target_distinct2", format_real(tgt_words ? distinct_n(targets, 2) : 0.0)},
  };
  if (config.out.empty()) {
    std::cout << "statistic,value\n";
    for (const auto& [k, v] : stats) std::cout << k << ',' << v << '\n';
  } else {
    std::filesystem::create_directories(config.out);
    csv::Writer w(config.out / "corpus_stats.csv", {"statistic", "value"});
    for (const auto& [k, v] : stats) w.row({k, v});
    write_resolved_config(config.out, config);
  }
  return kExitOk;
}

int cmd_synth(const RunConfig& config) {
  std::filesystem::create_directories(config.out);
  synthetic::write_corpus_tsv(config.out / "corpus.tsv", synthetic::dialogue_corpus(config.synth_pairs, config.seed));
  synthetic::write_embeddings(config.out / "embeddings.txt", synthetic::embeddings(config.synth_dim, config.seed));
  synthetic::write_stopwords(config.out / "stopwords.txt");
  write_resolved_config(config.out, config);
  std::cout << "wrote " << config.synth_pairs << " pairs, embeddings and stopwords -> " << config.out.string() << '\n';
  return kExitOk;
}

}  // namespace bidi::cli

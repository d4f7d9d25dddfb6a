#pragma once

// Data-parallel inner loops of the decoders. Each kernel has a serial
// reference and an OpenMP version; both write disjoint output slots and are
// required to produce bit-identical results.

#include <span>
#include <utility>
#include <vector>

#include "bidi/corpus.hpp"

namespace bidi {

class LanguageModel;

enum class Execution { serial, parallel };

namespace kernels {

// out[h * V + w] = log P(w | source, prefixes[h]) for every alive prefix.
void expand_scores_serial(const LanguageModel& model, std::span<const TokenId> source,
                          std::span<const TokenSeq> prefixes, std::span<double> out);
void expand_scores_omp(const LanguageModel& model, std::span<const TokenId> source,
                       std::span<const TokenSeq> prefixes, std::span<double> out);

inline void expand_scores(Execution ex, const LanguageModel& model, std::span<const TokenId> source,
                          std::span<const TokenSeq> prefixes, std::span<double> out) {
  if (ex == Execution::parallel)
    expand_scores_omp(model, source, prefixes, out);
  else
    expand_scores_serial(model, source, prefixes, out);
}

// Runs f(i) for i in [0, n). The parallel variant uses a static schedule.
template <typename F>
void for_each_index_serial(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

template <typename F>
void for_each_index_omp(std::size_t n, F&& f) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

template <typename F>
void for_each_index(Execution ex, std::size_t n, F&& f) {
  if (ex == Execution::parallel)
    for_each_index_omp(n, std::forward<F>(f));
  else
    for_each_index_serial(n, std::forward<F>(f));
}

}  // namespace kernels
}  // namespace bidi

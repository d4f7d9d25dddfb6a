#include "bidi/kernels.hpp"

#include <stdexcept>

#include "bidi/lm.hpp"

namespace bidi::kernels {

namespace {

void check_shape(const LanguageModel& model, std::span<const TokenSeq> prefixes, std::span<double> out) {
  if (out.size() != prefixes.size() * model.vocab_size())
    throw std::invalid_argument("expand_scores: output must hold prefixes * V slots");
}

}  // namespace

void expand_scores_serial(const LanguageModel& model, std::span<const TokenId> source,
                          std::span<const TokenSeq> prefixes, std::span<double> out) {
  check_shape(model, prefixes, out);
  const std::size_t v = model.vocab_size();
  for (std::size_t h = 0; h < prefixes.size(); ++h)
    model.next_token_logprobs(source, prefixes[h], out.subspan(h * v, v));
}

void expand_scores_omp(const LanguageModel& model, std::span<const TokenId> source,
                       std::span<const TokenSeq> prefixes, std::span<double> out) {
  check_shape(model, prefixes, out);
  const std::size_t v = model.vocab_size();
  const auto n = static_cast<long long>(prefixes.size());
#pragma omp parallel for schedule(static)
  for (long long h = 0; h < n; ++h) {
    const auto row = static_cast<std::size_t>(h);
    model.next_token_logprobs(source, prefixes[row], out.subspan(row * v, v));
  }
}

}  // namespace bidi::kernels

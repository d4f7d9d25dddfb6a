#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "bidi/bidi.hpp"

namespace bidi {

enum class Algorithm { vbs, bidis, bidia_bleu, bidia_wmd };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view s);
bool is_bidia(Algorithm a);

// Exact operation counts of one decode.
struct ComplexityReport {
  Algorithm algorithm = Algorithm::vbs;
  std::size_t B = 0;  // total hypothesis budget; bidia splits it in two
  std::size_t V = 0;
  std::size_t T = 0;
  std::size_t expansions = 0;
  std::vector<std::size_t> sort_events;  // candidates sorted per step
  std::size_t pairwise_sim_evals = 0;
  std::size_t rescoring_evals = 0;
  std::chrono::nanoseconds wall_time{0};
};

ComplexityReport make_report(Algorithm a, const SearchParams& p, std::size_t V, const DecodeOutput& out);
ComplexityReport make_report(const SearchParams& p, std::size_t V, const BidiSResult& r);
ComplexityReport make_report(Algorithm a, const SearchParams& p, std::size_t V, const BidiAResult& r);

struct BoundCheck {
  bool pass = true;
  std::string detail;  // names the violated bound on failure
};

/// vbs / bidis: expansions <= T*B*V and every sort <= B*V candidates; bidis
/// also needs exactly B re-scoring passes. bidia: expansions <= 2*T*(B/2)*V,
/// every sort <= (B/2)*V, and exactly (B/2)^2 pairwise evaluations.
BoundCheck check_bounds(const ComplexityReport& report, std::size_t B, std::size_t V, std::size_t T);

// One CSV row per run. Wall time is optional because it is the only
// non-deterministic field.
std::string complexity_csv_header(bool with_time);
std::string complexity_csv_row(const ComplexityReport& r, bool with_time);

}  // namespace bidi

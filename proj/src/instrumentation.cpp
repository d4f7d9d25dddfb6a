#include "bidi/instrumentation.hpp"

#include <algorithm>
#include <sstream>

namespace bidi {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::vbs:
      return "vbs";
    case Algorithm::bidis:
      return "bidis";
    case Algorithm::bidia_bleu:
      return "bidia-bleu";
    case Algorithm::bidia_wmd:
      return "bidia-wmd";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "vbs") return Algorithm::vbs;
  if (s == "bidis") return Algorithm::bidis;
  if (s == "bidia-bleu") return Algorithm::bidia_bleu;
  if (s == "bidia-wmd") return Algorithm::bidia_wmd;
  throw ParameterError("unknown algorithm '" + std::string(s) + "'");
}

bool is_bidia(Algorithm a) { return a == Algorithm::bidia_bleu || a == Algorithm::bidia_wmd; }

ComplexityReport make_report(Algorithm a, const SearchParams& p, std::size_t V, const DecodeOutput& out) {
  ComplexityReport r;
  r.algorithm = a;
  r.B = p.B;
  r.V = V;
  r.T = p.T;
  r.expansions = out.expansions;
  r.sort_events = out.sort_events;
  return r;
}

ComplexityReport make_report(const SearchParams& p, std::size_t V, const BidiSResult& res) {
  auto r = make_report(Algorithm::bidis, p, V, res.output);
  r.rescoring_evals = res.rescoring_evals;
  return r;
}

ComplexityReport make_report(Algorithm a, const SearchParams& p, std::size_t V, const BidiAResult& res) {
  auto r = make_report(a, p, V, res.output);
  r.pairwise_sim_evals = res.pairwise_evals;
  return r;
}

BoundCheck check_bounds(const ComplexityReport& r, std::size_t B, std::size_t V, std::size_t T) {
  BoundCheck check;
  auto fail = [&](const std::string& what) {
    if (check.pass) check.detail = what;
    else check.detail += "; " + what;
    check.pass = false;
  };
  const bool bidia = is_bidia(r.algorithm);
  const std::size_t width = bidia ? B / 2 : B;
  const std::size_t max_expansions = bidia ? 2 * T * width * V : T * B * V;
  if (r.expansions > max_expansions)
    fail("expansions " + std::to_string(r.expansions) + " > " + std::to_string(max_expansions));
  for (std::size_t i = 0; i < r.sort_events.size(); ++i)
    if (r.sort_events[i] > width * V)
      fail("sort event " + std::to_string(i) + " sorted " + std::to_string(r.sort_events[i]) + " > " +
           std::to_string(width * V));
  if (r.algorithm == Algorithm::bidis && r.rescoring_evals != B)
    fail("rescoring evals " + std::to_string(r.rescoring_evals) + " != B = " + std::to_string(B));
  if (bidia && r.pairwise_sim_evals != width * width)
    fail("pairwise evals " + std::to_string(r.pairwise_sim_evals) + " != (B/2)^2 = " + std::to_string(width * width));
  return check;
}

std::string complexity_csv_header(bool with_time) {
  std::string h = "algorithm,B,V,T,expansions,sort_steps,max_sorted,pairwise_sim_evals,rescoring_evals";
  if (with_time) h += ",wall_time_us";
  return h;
}

std::string complexity_csv_row(const ComplexityReport& r, bool with_time) {
  std::ostringstream os;
  const std::size_t max_sorted =
      r.sort_events.empty() ? 0 : *std::max_element(r.sort_events.begin(), r.sort_events.end());
  os << to_string(r.algorithm) << ',' << r.B << ',' << r.V << ',' << r.T << ',' << r.expansions << ','
     << r.sort_events.size() << ',' << max_sorted << ',' << r.pairwise_sim_evals << ',' << r.rescoring_evals;
  if (with_time) os << ',' << std::chrono::duration_cast<std::chrono::microseconds>(r.wall_time).count();
  return os.str();
}

}  // namespace bidi

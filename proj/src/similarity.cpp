#include "bidi/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bidi {

std::string_view to_string(SimilarityKind k) { return k == SimilarityKind::bleu_t ? "bleu_t" : "wmd_t"; }
std::string_view to_string(BpMode m) { return m == BpMode::divide ? "divide" : "multiply"; }

BpMode parse_bp_mode(std::string_view s) {
  if (s == "divide") return BpMode::divide;
  if (s == "multiply") return BpMode::multiply;
  throw ParameterError("unknown bp mode '" + std::string(s) + "'");
}

double bp_t(std::size_t candidate_length, std::size_t T) {
  if (candidate_length < 1) throw ParameterError("bp_t: candidate length must be >= 1");
  if (T < 1) throw ParameterError("bp_t: T must be >= 1");
  if (candidate_length >= T) return 1.0;
  return std::exp(1.0 - static_cast<double>(T) / static_cast<double>(candidate_length));
}

// ---------------------------------------------------------------------------
// Embeddings and stopwords

bool EmbeddingTable::add(const std::string& word, std::span<const double> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_ || dimension_ == 0)
    throw std::invalid_argument("embedding for '" + word + "' has the wrong dimension");
  if (rows_.count(word)) return false;
  rows_.emplace(word, words_.size());
  words_.push_back(word);
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

bool EmbeddingTable::contains(std::string_view word) const { return rows_.count(std::string(word)) != 0; }

std::optional<std::size_t> EmbeddingTable::row(std::string_view word) const {
  auto it = rows_.find(std::string(word));
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingTable::vector(std::size_t row) const {
  return std::span<const double>(data_).subspan(row * dimension_, dimension_);
}

double EmbeddingTable::distance(std::size_t row_a, std::size_t row_b) const {
  const auto a = vector(row_a);
  const auto b = vector(row_b);
  double sum = 0.0;
  for (std::size_t k = 0; k < dimension_; ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto fail = [&](std::size_t lineno, const std::string& what) {
    throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + what);
  };

  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (lineno == 1 && fields.size() == 2) {
      std::size_t count = 0, dim = 0;
      if (parse_number(fields[0], count) && parse_number(fields[1], dim)) {
        if (dim == 0) fail(lineno, "header dimension must be positive");
        table.dimension_ = dim;
        continue;
      }
    }
    if (fields.size() < 2) fail(lineno, "expected a word followed by its vector");
    const std::size_t dim = fields.size() - 1;
    if (table.dimension_ != 0 && dim != table.dimension_)
      fail(lineno, "dimension " + std::to_string(dim) + " differs from " + std::to_string(table.dimension_));
    values.resize(dim);
    for (std::size_t k = 0; k < dim; ++k)
      if (!parse_number(fields[k + 1], values[k]) || !std::isfinite(values[k]))
        fail(lineno, "cannot parse '" + std::string(fields[k + 1]) + "' as a real");
    table.add(std::string(fields[0]), values);
  }
  if (table.size() == 0) throw FormatError(path.string() + ": no embeddings");
  return table;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_ws(line);
    if (!fields.empty()) words.emplace(fields[0]);
  }
  return words;
}

// ---------------------------------------------------------------------------
// Transportation simplex

namespace {

void check_marginal(const std::vector<double>& w, const char* name) {
  if (w.empty()) throw std::invalid_argument(std::string("transport: empty ") + name);
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string("transport: negative ") + name);
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument(std::string("transport: ") + name + " must sum to 1");
}

}  // namespace

TransportSolution solve_transport(const TransportProblem& p) {
  check_marginal(p.supply, "supply");
  check_marginal(p.demand, "demand");
  const std::size_t m = p.supply.size();
  const std::size_t n = p.demand.size();
  if (p.cost.size() != m * n) throw std::invalid_argument("transport: cost matrix shape mismatch");
  double max_cost = 0.0;
  for (double c : p.cost) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("transport: costs must be finite and >= 0");
    max_cost = std::max(max_cost, c);
  }
  const double tol = 1e-12 * std::max(1.0, max_cost);

  TransportSolution sol;
  sol.flow.assign(m * n, 0.0);
  std::vector<char> basic(m * n, 0);

  // North-west corner: exactly m + n - 1 basic cells forming a spanning tree.
  {
    std::vector<double> s = p.supply, d = p.demand;
    std::size_t i = 0, j = 0;
    for (;;) {
      const double x = std::min(s[i], d[j]);
      sol.flow[i * n + j] = x;
      basic[i * n + j] = 1;
      s[i] -= x;
      d[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1)
        ++j;
      else if (j == n - 1)
        ++i;
      else if (s[i] <= d[j])
        ++i;
      else
        ++j;
    }
  }

  // Nodes 0..m-1 are supply rows, m..m+n-1 demand columns.
  const std::size_t nodes = m + n;
  std::vector<std::vector<std::size_t>> adj(nodes);
  std::vector<double> potential(nodes);
  std::vector<std::size_t> parent(nodes), queue;
  std::vector<char> seen(nodes);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  auto build_adjacency = [&] {
    for (auto& a : adj) a.clear();
    for (std::size_t c = 0; c < m * n; ++c)
      if (basic[c]) {
        adj[c / n].push_back(m + c % n);
        adj[m + c % n].push_back(c / n);
      }
  };
  auto cell_of = [&](std::size_t a, std::size_t b) { return a < m ? a * n + (b - m) : b * n + (a - m); };
  // BFS over the basis tree from `root`, filling parent[] and potentials.
  auto traverse = [&](std::size_t root) {
    std::fill(seen.begin(), seen.end(), 0);
    queue.assign(1, root);
    seen[root] = 1;
    parent[root] = kNone;
    potential[root] = 0.0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t a = queue[q];
      for (std::size_t b : adj[a]) {
        if (seen[b]) continue;
        seen[b] = 1;
        parent[b] = a;
        // u_i + v_j = c_ij on basic cells
        potential[b] = p.cost[cell_of(a, b)] - potential[a];
        queue.push_back(b);
      }
    }
  };

  constexpr std::size_t kMaxPivots = 1'000'000;
  std::vector<std::size_t> cycle;
  for (;;) {
    build_adjacency();
    traverse(0);

    std::size_t entering = kNone;
    for (std::size_t c = 0; c < m * n && entering == kNone; ++c) {
      if (basic[c]) continue;
      const double reduced = p.cost[c] - potential[c / n] - potential[m + c % n];
      if (reduced < -tol) entering = c;
    }
    if (entering == kNone) break;
    if (++sol.pivots > kMaxPivots) throw std::runtime_error("transport: pivot limit exceeded");

    // Tree path from the entering column back to its row closes the cycle.
    const std::size_t row = entering / n;
    const std::size_t col = m + entering % n;
    traverse(row);
    cycle.clear();
    for (std::size_t a = col; parent[a] != kNone; a = parent[a]) cycle.push_back(cell_of(a, parent[a]));

    // cycle[0], cycle[2], ... lose flow; cycle[1], cycle[3], ... gain it.
    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < cycle.size(); k += 2) {
      const std::size_t c = cycle[k];
      if (leaving == kNone || sol.flow[c] < sol.flow[leaving] || (sol.flow[c] == sol.flow[leaving] && c < leaving))
        leaving = c;
    }
    const double theta = sol.flow[leaving];
    for (std::size_t k = 0; k < cycle.size(); ++k) sol.flow[cycle[k]] += (k % 2 == 0 ? -theta : theta);
    sol.flow[entering] = theta;
    sol.flow[leaving] = 0.0;
    basic[entering] = 1;
    basic[leaving] = 0;
  }

  for (auto& f : sol.flow) f = std::max(f, 0.0);
  for (std::size_t c = 0; c < m * n; ++c) sol.cost += sol.flow[c] * p.cost[c];
  return sol;
}

// ---------------------------------------------------------------------------
// Word Mover's Distance

namespace {

// Embedding rows (with repeats) -> optimal transport cost between the two
// normalized bags of unique rows.
std::optional<double> wmd_from_rows(const EmbeddingTable& table, std::vector<std::size_t> xs,
                                    std::vector<std::size_t> ys) {
  if (xs.empty() || ys.empty()) return std::nullopt;
  auto bag = [](std::vector<std::size_t>& rows, std::vector<double>& weights) {
    std::sort(rows.begin(), rows.end());
    std::vector<std::size_t> unique;
    const double total = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size();) {
      std::size_t j = i;
      while (j < rows.size() && rows[j] == rows[i]) ++j;
      unique.push_back(rows[i]);
      weights.push_back(static_cast<double>(j - i) / total);
      i = j;
    }
    rows = std::move(unique);
  };
  TransportProblem problem;
  bag(xs, problem.supply);
  bag(ys, problem.demand);
  problem.cost.reserve(xs.size() * ys.size());
  for (auto a : xs)
    for (auto b : ys) problem.cost.push_back(table.distance(a, b));
  return solve_transport(problem).cost;
}

}  // namespace

WmdResult wmd(const WordSeq& x, const WordSeq& y, const EmbeddingTable& table, const StopwordSet& stopwords) {
  WmdResult result;
  auto rows = [&](const WordSeq& words) {
    std::vector<std::size_t> out;
    for (const auto& w : words) {
      if (stopwords.count(w)) continue;
      if (auto r = table.row(w))
        out.push_back(*r);
      else
        ++result.oov_dropped;
    }
    return out;
  };
  auto xs = rows(x);
  auto ys = rows(y);
  result.distance = wmd_from_rows(table, std::move(xs), std::move(ys));
  return result;
}

WmdContext::WmdContext(const Vocabulary& vocab, std::shared_ptr<const EmbeddingTable> table, StopwordSet stopwords)
    : table_(std::move(table)), rows_(vocab.size()), oov_(vocab.size(), false) {
  if (!table_) throw std::invalid_argument("WmdContext needs an embedding table");
  for (TokenId id = 0; id < vocab.size(); ++id) {
    const auto& surface = vocab.surface(id);
    if (stopwords.count(surface)) continue;
    rows_[id] = table_->row(surface);
    oov_[id] = !rows_[id].has_value();
  }
}

WmdResult WmdContext::distance(const TokenSeq& x, const TokenSeq& y) const {
  WmdResult result;
  auto rows = [&](const TokenSeq& tokens) {
    std::vector<std::size_t> out;
    for (auto t : tokens) {
      if (t >= rows_.size()) throw std::out_of_range("WmdContext: token id outside the vocabulary");
      if (rows_[t])
        out.push_back(*rows_[t]);
      else if (oov_[t])
        ++result.oov_dropped;
    }
    return out;
  };
  result.distance = wmd_from_rows(*table_, rows(x), rows(y));
  return result;
}

// ---------------------------------------------------------------------------

void SimilaritySpec::validate() const {
  if (T < 1) throw ParameterError("similarity: T must be >= 1");
  if (weights.empty()) throw ParameterError("similarity: N must be >= 1");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ParameterError("similarity: n-gram weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("similarity: n-gram weights must sum to 1");
  if (kind == SimilarityKind::wmd_t && !wmd)
    throw ParameterError("similarity: wmd_t needs embeddings and stopwords");
}

Dissimilarity dissimilarity(const TokenSeq& y_n, const TokenSeq& y_r, const SimilaritySpec& spec) {
  Dissimilarity d;
  if (y_n.empty() || y_r.empty()) return d;
  if (spec.kind == SimilarityKind::bleu_t) {
    d.value = 1.0 - bleu_t(y_n, y_r, spec);
    return d;
  }
  const auto w = spec.wmd->distance(y_n, y_r);
  d.oov_dropped = w.oov_dropped;
  if (!w.distance) return d;
  const double bp = bp_t(y_n.size(), spec.T);
  d.value = spec.bp_mode == BpMode::divide ? *w.distance / bp : *w.distance * bp;
  return d;
}

}  // namespace bidi

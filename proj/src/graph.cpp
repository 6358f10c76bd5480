#include "blockgof/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blockgof {

Graph::Graph(Index n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw DomainError("graph size must be non-negative");
}

Graph Graph::from_edges(Index n, std::span<const Edge> edges) {
  std::vector<std::vector<NodeId>> lists(static_cast<std::size_t>(n));
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw DomainError("edge endpoint out of range");
    if (e.u == e.v) throw DomainError("self-loop at node " + std::to_string(e.u));
    lists[e.u].push_back(e.v);
    lists[e.v].push_back(e.u);
  }
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return from_neighbor_lists(std::move(lists));
}

Graph Graph::from_neighbor_lists(std::vector<std::vector<NodeId>> lists) {
  Graph g(static_cast<Index>(lists.size()));
  std::size_t total = 0;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    std::sort(lists[i].begin(), lists[i].end());
    total += lists[i].size();
    g.offsets_[i + 1] = static_cast<Index>(total);
  }
  g.neighbors_.reserve(total);
  for (auto& l : lists) g.neighbors_.insert(g.neighbors_.end(), l.begin(), l.end());
  return g;
}

bool Graph::has_edge(Index i, Index j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), static_cast<NodeId>(j));
}

VectorX<double> Graph::degrees() const {
  VectorX<double> d(n_);
  for (Index i = 0; i < n_; ++i) d(i) = static_cast<double>(degree(i));
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (Index i = 0; i < n_; ++i)
    for (NodeId j : neighbors(i))
      if (j > i) out.push_back({static_cast<NodeId>(i), j});
  return out;
}

Graph Graph::induced_subgraph(std::span<const Index> nodes) const {
  std::vector<Index> map(static_cast<std::size_t>(n_), -1);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    if (t > 0 && nodes[t] <= nodes[t - 1])
      throw DomainError("induced_subgraph: node list must be strictly increasing");
    map[nodes[t]] = static_cast<Index>(t);
  }
  std::vector<std::vector<NodeId>> lists(nodes.size());
  for (std::size_t t = 0; t < nodes.size(); ++t)
    for (NodeId j : neighbors(nodes[t]))
      if (map[j] >= 0) lists[t].push_back(static_cast<NodeId>(map[j]));
  return from_neighbor_lists(std::move(lists));
}

Graph Graph::permuted(std::span<const Index> perm) const {
  if (static_cast<Index>(perm.size()) != n_) throw DomainError("permutation size mismatch");
  std::vector<std::vector<NodeId>> lists(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i)
    for (NodeId j : neighbors(i)) lists[perm[i]].push_back(static_cast<NodeId>(perm[j]));
  return from_neighbor_lists(std::move(lists));
}

WeightedDigraph::WeightedDigraph(MatrixX<double> weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) throw DomainError("weight matrix must be square");
  for (Index i = 0; i < weights_.rows(); ++i) {
    if (weights_(i, i) != 0.0) throw DomainError("weight matrix diagonal must be zero");
    for (Index j = 0; j < weights_.cols(); ++j)
      if (!std::isfinite(weights_(i, j)) || weights_(i, j) < 0.0)
        throw DomainError("weights must be finite and non-negative");
  }
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

long long parse_id(std::string_view tok, long line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected integer node id, got '" + std::string(tok) + "'", line);
  if (v < 0) throw ParseError("negative node id " + std::string(tok), line);
  return v;
}

double parse_weight(std::string_view tok, long line) {
  try {
    std::size_t used = 0;
    double w = std::stod(std::string(tok), &used);
    if (used != tok.size()) throw std::invalid_argument("trailing");
    return w;
  } catch (const std::exception&) {
    throw ParseError("expected numeric weight, got '" + std::string(tok) + "'", line);
  }
}

struct RawLine {
  long long a;
  long long b;
  double w;
  long line;
};

struct RawList {
  std::vector<RawLine> rows;
  std::optional<Index> declared_nodes;
  std::optional<int> declared_base;
};

// Directives live in comments so that generic tools still read the file.
void parse_directive(std::string_view comment, RawList& raw, long line) {
  auto tokens = split_ws(comment);
  if (tokens.size() != 2) return;
  if (tokens[0] == "nodes") {
    raw.declared_nodes = static_cast<Index>(parse_id(tokens[1], line));
  } else if (tokens[0] == "base") {
    auto b = parse_id(tokens[1], line);
    if (b > 1) throw ParseError("base directive must be 0 or 1", line);
    raw.declared_base = static_cast<int>(b);
  }
}

RawList read_rows(std::istream& in, bool weight_required) {
  RawList raw;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view(text);
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      parse_directive(view.substr(hash + 1), raw, line);
      view = view.substr(0, hash);
    }
    auto tokens = split_ws(view);
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens.size() > 3 || (weight_required && tokens.size() != 3))
      throw ParseError(weight_required ? "expected 'i j weight'" : "expected 'i j [weight]'",
                       line);
    RawLine row{parse_id(tokens[0], line), parse_id(tokens[1], line), 1.0, line};
    if (weight_required) row.w = parse_weight(tokens[2], line);
    raw.rows.push_back(row);
  }
  return raw;
}

// Resolves index base and node count, converting ids in place to 0-based.
Index normalise_ids(RawList& raw, std::optional<Index> n_hint, bool& one_based) {
  long long min_id = 0;
  long long max_id = -1;
  if (!raw.rows.empty()) {
    min_id = raw.rows.front().a;
    for (const auto& r : raw.rows) {
      min_id = std::min({min_id, r.a, r.b});
      max_id = std::max({max_id, r.a, r.b});
    }
  }
  one_based = raw.declared_base ? *raw.declared_base == 1 : (!raw.rows.empty() && min_id >= 1);
  const long long shift = one_based ? 1 : 0;
  std::optional<Index> n = n_hint ? n_hint : raw.declared_nodes;
  for (auto& r : raw.rows) {
    r.a -= shift;
    r.b -= shift;
    if (r.a < 0 || r.b < 0) throw ParseError("node id 0 in a 1-based edge list", r.line);
    if (n && (r.a >= *n || r.b >= *n))
      throw BoundsError("node id " + std::to_string(std::max(r.a, r.b) + shift) +
                            " exceeds declared node count " + std::to_string(*n),
                        r.line);
  }
  if (n) return *n;
  return static_cast<Index>(max_id - shift + 1);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

EdgeListLoad load_edge_list(std::istream& in, std::optional<Index> n_hint) {
  RawList raw = read_rows(in, /*weight_required=*/false);
  EdgeListLoad result;
  Index n = normalise_ids(raw, n_hint, result.one_based);
  std::vector<Edge> edges;
  edges.reserve(raw.rows.size());
  for (const auto& r : raw.rows) {
    if (r.a == r.b) {
      ++result.self_loops_dropped;
      continue;
    }
    auto u = static_cast<NodeId>(std::min(r.a, r.b));
    auto v = static_cast<NodeId>(std::max(r.a, r.b));
    edges.push_back({u, v});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  auto last = std::unique(edges.begin(), edges.end());
  result.duplicates_collapsed = static_cast<Index>(edges.end() - last);
  edges.erase(last, edges.end());
  result.graph = Graph::from_edges(n, edges);
  return result;
}

EdgeListLoad load_edge_list_file(const std::string& path, std::optional<Index> n_hint) {
  auto in = open_input(path);
  return load_edge_list(in, n_hint);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.size() << "\n# base 0\n";
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_edge_list(out, g);
}

WeightedLoad load_weighted_digraph(std::istream& in, std::optional<Index> n_hint) {
  RawList raw = read_rows(in, /*weight_required=*/true);
  bool one_based = false;
  Index n = normalise_ids(raw, n_hint, one_based);
  WeightedLoad result;
  MatrixX<double> w = MatrixX<double>::Zero(n, n);
  for (const auto& r : raw.rows) {
    if (!std::isfinite(r.w) || r.w < 0.0)
      throw ParseError("weights must be finite and non-negative", r.line);
    if (r.a == r.b) {
      ++result.self_loops_dropped;
      continue;
    }
    w(r.a, r.b) += r.w;
  }
  result.digraph = WeightedDigraph(std::move(w));
  return result;
}

WeightedLoad load_weighted_digraph_file(const std::string& path, std::optional<Index> n_hint) {
  auto in = open_input(path);
  return load_weighted_digraph(in, n_hint);
}

std::vector<Index> connected_components(const Graph& g) {
  const Index n = g.size();
  std::vector<Index> comp(static_cast<std::size_t>(n), -1);
  std::vector<Index> queue;
  queue.reserve(static_cast<std::size_t>(n));
  Index next = 0;
  for (Index s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    queue.clear();
    queue.push_back(s);
    comp[s] = next;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeId j : g.neighbors(queue[head]))
        if (comp[j] < 0) {
          comp[j] = next;
          queue.push_back(j);
        }
    ++next;
  }
  return comp;
}

ComponentExtraction largest_connected_component(const Graph& g) {
  if (g.size() < 1) throw DomainError("largest_connected_component: empty graph");
  auto comp = connected_components(g);
  Index count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<Index> sizes(static_cast<std::size_t>(count), 0);
  for (Index c : comp) ++sizes[c];
  // Components are numbered by smallest member, so the first maximum wins ties.
  Index best = std::max_element(sizes.begin(), sizes.end()) - sizes.begin();

  ComponentExtraction out;
  out.old_to_new.assign(comp.size(), -1);
  for (Index i = 0; i < g.size(); ++i)
    if (comp[i] == best) {
      out.old_to_new[i] = static_cast<Index>(out.new_to_old.size());
      out.new_to_old.push_back(i);
    }
  out.graph = g.induced_subgraph(out.new_to_old);
  return out;
}

Graph symmetrize_and_threshold(const WeightedDigraph& w, double percentile) {
  if (!(percentile > 0.0 && percentile < 1.0))
    throw DomainError("percentile must lie in (0, 1)");
  const Index n = w.size();
  if (n < 2) throw DomainError("symmetrize_and_threshold needs at least two nodes");
  const auto& m = w.weights();
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) sums.push_back(m(i, j) + m(j, i));

  // Lower empirical quantile: the rank-th order statistic with rank = ceil(p N).
  const auto total = static_cast<double>(sums.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile * total - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sums.size());
  std::vector<double> sorted = sums;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  const double threshold = sorted[rank - 1];

  std::vector<Edge> edges;
  std::size_t t = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j, ++t)
      if (sums[t] >= threshold) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
  return Graph::from_edges(n, edges);
}

}  // namespace blockgof

#include "blockgof/block_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "blockgof/errors.hpp"

namespace blockgof {

Membership::Membership(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k < 1) throw DomainError("membership needs at least one community");
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels_) {
    if (l < 0 || l >= k) throw DomainError("community label out of range");
    ++counts[l];
  }
  for (int u = 0; u < k; ++u)
    if (counts[u] == 0) throw DomainError("community " + std::to_string(u + 1) + " is empty");

  starts_.assign(static_cast<std::size_t>(k) + 1, 0);
  for (int u = 0; u < k; ++u) starts_[u + 1] = starts_[u] + counts[u];
  order_.resize(labels_.size());
  std::vector<Index> fill(starts_.begin(), starts_.end() - 1);
  for (std::size_t i = 0; i < labels_.size(); ++i) order_[fill[labels_[i]]++] = static_cast<Index>(i);
}

Membership Membership::from_one_based(std::span<const int> labels) {
  std::vector<int> zero(labels.begin(), labels.end());
  int k = 0;
  for (int& l : zero) {
    if (l < 1) throw DomainError("membership labels are 1-based");
    k = std::max(k, l);
    --l;
  }
  return Membership(std::move(zero), k);
}

Membership Membership::single_community(Index n) {
  return Membership(std::vector<int>(static_cast<std::size_t>(n), 0), 1);
}

std::vector<Index> Membership::sizes() const {
  std::vector<Index> s(static_cast<std::size_t>(k_));
  for (int u = 0; u < k_; ++u) s[u] = community_size(u);
  return s;
}

Index Membership::smallest_community() const {
  auto s = sizes();
  return *std::min_element(s.begin(), s.end());
}

Membership Membership::canonical() const {
  std::vector<int> tau(static_cast<std::size_t>(k_), -1);
  int next = 0;
  for (int l : labels_)
    if (tau[l] < 0) tau[l] = next++;
  return relabeled(tau);
}

Membership Membership::relabeled(std::span<const int> tau) const {
  if (static_cast<int>(tau.size()) != k_) throw DomainError("relabeling size mismatch");
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = tau[labels_[i]];
  return Membership(std::move(out), k_);
}

Membership Membership::permuted(std::span<const Index> perm) const {
  if (static_cast<Index>(perm.size()) != size()) throw DomainError("permutation size mismatch");
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[perm[i]] = labels_[i];
  return Membership(std::move(out), k_);
}

BlockMatrix::BlockMatrix(MatrixX<double> probs) : probs_(std::move(probs)) {
  if (probs_.rows() != probs_.cols() || probs_.rows() < 1)
    throw DomainError("block matrix must be square and non-empty");
  for (Index u = 0; u < probs_.rows(); ++u)
    for (Index v = 0; v < probs_.cols(); ++v) {
      const double p = probs_(u, v);
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("block probabilities must lie in [0, 1]");
      if (p != probs_(v, u)) throw DomainError("block matrix must be symmetric");
    }
}

BlockMatrix BlockMatrix::planted(int k, double scale, double boost) {
  MatrixX<double> m = MatrixX<double>::Constant(k, k, scale);
  m.diagonal().setConstant(scale * (1.0 + boost));
  return BlockMatrix(std::move(m));
}

BlockMatrix BlockMatrix::constant(int k, double value) {
  return BlockMatrix(MatrixX<double>::Constant(k, k, value));
}

bool BlockMatrix::strictly_inside_unit_interval() const {
  return (probs_.array() > 0.0).all() && (probs_.array() < 1.0).all();
}

DegreeParams::DegreeParams(VectorX<double> omega) : omega_(std::move(omega)) {
  for (Index i = 0; i < omega_.size(); ++i)
    if (!(omega_(i) > 0.0) || !std::isfinite(omega_(i)))
      throw DomainError("degree parameter " + std::to_string(i) + " must be finite and positive");
}

DegreeParams DegreeParams::ones(Index n) { return DegreeParams(VectorX<double>::Ones(n)); }

bool DegreeParams::is_normalized(const Membership& sigma, double rel_tol) const {
  if (sigma.size() != size()) return false;
  for (int u = 0; u < sigma.communities(); ++u) {
    double sum = 0.0;
    for (Index i : sigma.members(u)) sum += omega_(i);
    const auto target = static_cast<double>(sigma.community_size(u));
    if (std::abs(sum - target) > rel_tol * target) return false;
  }
  return true;
}

Membership sample_membership_balanced(Index n, int k, Rng& rng) {
  if (k < 1) throw DomainError("community count must be positive");
  if (k > n) throw DomainError("cannot split " + std::to_string(n) + " nodes into " +
                               std::to_string(k) + " non-empty communities");
  // Contiguous blocks; the n mod k larger blocks are chosen at random.
  std::vector<int> extra(static_cast<std::size_t>(k), 0);
  std::fill_n(extra.begin(), n % k, 1);
  std::shuffle(extra.begin(), extra.end(), rng);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int u = 0; u < k; ++u) labels.insert(labels.end(), n / k + extra[u], u);
  return Membership(std::move(labels), k);
}

Membership sample_membership_multinomial(Index n, std::span<const double> pi, Rng& rng,
                                         std::size_t* resamples) {
  const int k = static_cast<int>(pi.size());
  if (k < 1) throw DomainError("probability vector is empty");
  double total = 0.0;
  for (double p : pi) {
    if (!(p > 0.0)) throw DomainError("multinomial probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("multinomial probabilities must sum to 1");
  if (n < k) throw DomainError("fewer nodes than communities");

  std::vector<double> cumulative(pi.size());
  std::partial_sum(pi.begin(), pi.end(), cumulative.begin());
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<Index> counts(static_cast<std::size_t>(k));
  for (std::size_t attempt = 0;; ++attempt) {
    std::fill(counts.begin(), counts.end(), 0);
    for (auto& l : labels) {
      const double x = uniform01(rng) * total;
      l = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end() - 1, x) -
                           cumulative.begin());
      ++counts[l];
    }
    if (std::find(counts.begin(), counts.end(), 0) == counts.end()) {
      if (resamples) *resamples = attempt;
      return Membership(std::move(labels), k);
    }
  }
}

namespace {

template <typename Probability>
Graph sample_bernoulli_graph(Index n, Probability&& prob, Rng& rng) {
  std::vector<std::vector<NodeId>> lists(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (uniform01(rng) < prob(i, j)) {
        lists[i].push_back(static_cast<NodeId>(j));
        lists[j].push_back(static_cast<NodeId>(i));
      }
  return Graph::from_neighbor_lists(std::move(lists));
}

}  // namespace

Graph sample_sbm(const Membership& sigma, const BlockMatrix& b, Rng& rng) {
  if (b.communities() != sigma.communities())
    throw DomainError("block matrix has " + std::to_string(b.communities()) +
                      " communities, membership has " + std::to_string(sigma.communities()));
  const auto& labels = sigma.labels();
  const auto& p = b.matrix();
  return sample_bernoulli_graph(
      sigma.size(), [&](Index i, Index j) { return p(labels[i], labels[j]); }, rng);
}

Graph sample_dcsbm(const Membership& sigma, const BlockMatrix& b, const DegreeParams& omega,
                   Rng& rng) {
  if (b.communities() != sigma.communities())
    throw DomainError("block matrix and membership disagree on community count");
  if (omega.size() != sigma.size()) throw DomainError("degree parameters and membership differ in size");
  const auto& labels = sigma.labels();
  const auto& p = b.matrix();
  const auto& w = omega.values();
  const Index n = sigma.size();

  double worst = -1.0;
  Index wi = 0, wj = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double q = w(i) * w(j) * p(labels[i], labels[j]);
      if (q > worst) {
        worst = q;
        wi = i;
        wj = j;
      }
    }
  if (worst > 1.0) {
    std::ostringstream msg;
    msg << "edge probability omega_i*omega_j*B = " << worst << " exceeds 1 at pair (" << wi
        << ", " << wj << ")";
    throw DomainError(msg.str());
  }
  return sample_bernoulli_graph(
      n, [&](Index i, Index j) { return w(i) * w(j) * p(labels[i], labels[j]); }, rng);
}

DegreeParams sample_degree_params_sim4(Index n, Rng& rng) {
  if (n < 1) throw DomainError("need at least one node");
  VectorX<double> omega(n);
  for (Index i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    if (u < 0.8)
      omega(i) = 0.8 + 0.4 * uniform01(rng);
    else if (u < 0.9)
      omega(i) = 9.0 / 11.0;
    else
      omega(i) = 13.0 / 11.0;
  }
  return DegreeParams(std::move(omega));
}

BlockCounts block_counts(const Graph& g, const Membership& sigma) {
  if (g.size() != sigma.size()) throw DomainError("membership length differs from node count");
  const int k = sigma.communities();
  BlockCounts c;
  c.pairs.resize(k, k);
  c.edges = MatrixX<std::int64_t>::Zero(k, k);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v) {
      const std::int64_t su = sigma.community_size(u);
      const std::int64_t sv = sigma.community_size(v);
      c.pairs(u, v) = u == v ? su * (su - 1) : su * sv;
    }
  for (Index i = 0; i < g.size(); ++i)
    for (NodeId j : g.neighbors(i)) ++c.edges(sigma[i], sigma[j]);
  return c;
}

BlockMatrix estimate_block_matrix(const Graph& g, const Membership& sigma0) {
  const int k = sigma0.communities();
  for (int u = 0; u < k; ++u)
    if (sigma0.community_size(u) < 2)
      throw DomainError("community " + std::to_string(u + 1) +
                        " is a singleton; its within-block probability is undefined");
  const BlockCounts c = block_counts(g, sigma0);
  MatrixX<double> b(k, k);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v)
      b(u, v) = static_cast<double>(c.edges(u, v)) / static_cast<double>(c.pairs(u, v));
  return BlockMatrix(std::move(b));
}

DegreeParams estimate_degree_params(const Graph& g, const Membership& sigma0) {
  if (g.size() != sigma0.size()) throw DomainError("membership length differs from node count");
  VectorX<double> omega(g.size());
  for (int u = 0; u < sigma0.communities(); ++u) {
    double total = 0.0;
    for (Index i : sigma0.members(u)) total += static_cast<double>(g.degree(i));
    if (total <= 0.0)
      throw DomainError("community " + std::to_string(u + 1) +
                        " has no edges; degree parameters are undefined");
    const auto size = static_cast<double>(sigma0.community_size(u));
    for (Index i : sigma0.members(u)) {
      if (g.degree(i) == 0)
        throw DomainError("node " + std::to_string(i) +
                          " is isolated; its degree parameter estimate would be zero");
      omega(i) = size * static_cast<double>(g.degree(i)) / total;
    }
  }
  return DegreeParams(std::move(omega));
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::string strip(const std::string& s) {
  auto hash = s.find('#');
  std::string t = s.substr(0, hash);
  auto b = t.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = t.find_last_not_of(" \t\r");
  return t.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, long line) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + tok + "'", line);
  }
}

}  // namespace

Membership read_membership(std::istream& in) {
  std::vector<int> labels;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    auto t = strip(text);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      int l = std::stoi(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      labels.push_back(l);
    } catch (const std::exception&) {
      throw ParseError("expected an integer label, got '" + t + "'", line);
    }
  }
  return Membership::from_one_based(labels);
}

Membership read_membership_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_membership(in);
}

void write_membership(std::ostream& out, const Membership& sigma) {
  for (int l : sigma.labels()) out << l + 1 << '\n';
}

BlockMatrix read_block_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    auto t = strip(text);
    if (t.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(strip(cell), line));
    rows.push_back(std::move(row));
  }
  const auto k = static_cast<Index>(rows.size());
  MatrixX<double> m(k, k);
  for (Index u = 0; u < k; ++u) {
    if (static_cast<Index>(rows[u].size()) != k)
      throw ParseError("block matrix CSV must have k rows of k values", u + 1);
    for (Index v = 0; v < k; ++v) m(u, v) = rows[u][v];
  }
  return BlockMatrix(std::move(m));
}

BlockMatrix read_block_matrix_csv_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_block_matrix_csv(in);
}

void write_block_matrix_csv(std::ostream& out, const BlockMatrix& b) {
  out << std::setprecision(17);
  for (int u = 0; u < b.communities(); ++u) {
    for (int v = 0; v < b.communities(); ++v) out << (v ? "," : "") << b(u, v);
    out << '\n';
  }
}

DegreeParams read_degree_params(std::istream& in) {
  std::vector<double> values;
  std::string text;
  long line = 0;
  while (std::getline(in, text)) {
    ++line;
    auto t = strip(text);
    if (!t.empty()) values.push_back(parse_double(t, line));
  }
  return DegreeParams(Eigen::Map<VectorX<double>>(values.data(), static_cast<Index>(values.size())));
}

DegreeParams read_degree_params_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_degree_params(in);
}

void write_degree_params(std::ostream& out, const DegreeParams& omega) {
  out << std::setprecision(17);
  for (Index i = 0; i < omega.size(); ++i) out << omega[i] << '\n';
}

}  // namespace blockgof

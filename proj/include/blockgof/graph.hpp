#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "blockgof/errors.hpp"
#include "blockgof/types.hpp"

namespace blockgof {

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes 0..n-1 stored as sorted adjacency
/// lists (CSR). Symmetric, no self-loops, no multi-edges.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Index n);

  /// Builds from an edge list. Reversed and repeated pairs collapse to one
  /// edge. Self-loops and out-of-range endpoints are rejected.
  static Graph from_edges(Index n, std::span<const Edge> edges);

  /// Builds from per-node neighbour lists that are already symmetric and
  /// loop-free; each list is sorted in place.
  static Graph from_neighbor_lists(std::vector<std::vector<NodeId>> lists);

  Index size() const noexcept { return n_; }
  Index edge_count() const noexcept { return static_cast<Index>(neighbors_.size()) / 2; }

  std::span<const NodeId> neighbors(Index i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }
  Index degree(Index i) const { return offsets_[i + 1] - offsets_[i]; }
  bool has_edge(Index i, Index j) const;

  VectorX<double> degrees() const;

  /// Canonical edge list: each edge once with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  /// Subgraph induced by `nodes` (must be strictly increasing); node
  /// nodes[t] becomes t.
  Graph induced_subgraph(std::span<const Index> nodes) const;

  /// Returns this graph with node i relabelled perm[i].
  Graph permuted(std::span<const Index> perm) const;

  template <typename Scalar = double>
  MatrixX<Scalar> adjacency() const {
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(n_, n_);
    for (Index i = 0; i < n_; ++i)
      for (NodeId j : neighbors(i)) a(i, j) = Scalar(1);
    return a;
  }

  /// out = A * in for a dense block of column vectors.
  template <typename InDerived, typename OutDerived>
  void multiply(const Eigen::MatrixBase<InDerived>& in, Eigen::MatrixBase<OutDerived>& out) const {
    eigen_assert(in.rows() == n_ && out.rows() == n_ && out.cols() == in.cols());
    for (Index i = 0; i < n_; ++i) {
      auto row = out.row(i);
      row.setZero();
      for (NodeId j : neighbors(i)) row += in.row(j);
    }
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Index n_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<NodeId> neighbors_;
};

/// Directed non-negative weights with zero diagonal (e.g. bilateral trade).
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  explicit WeightedDigraph(MatrixX<double> weights);

  Index size() const noexcept { return weights_.rows(); }
  const MatrixX<double>& weights() const noexcept { return weights_; }

 private:
  MatrixX<double> weights_;
};

class BoundsError : public std::out_of_range {
 public:
  BoundsError(const std::string& what, long line)
      : std::out_of_range("line " + std::to_string(line) + ": " + what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

struct EdgeListLoad {
  Graph graph;
  Index self_loops_dropped = 0;
  Index duplicates_collapsed = 0;
  bool one_based = false;
};

/// Reads "i j [weight]" lines; '#' starts a comment. Node ids are 0- or
/// 1-based, detected from the minimum id unless a "# base 0|1" directive is
/// present. "# nodes N" fixes the node count when no hint is given.
EdgeListLoad load_edge_list(std::istream& in, std::optional<Index> n_hint = std::nullopt);
EdgeListLoad load_edge_list_file(const std::string& path, std::optional<Index> n_hint = std::nullopt);

/// Canonical form: directives, then "u v" with u < v in sorted order, 0-based.
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

struct WeightedLoad {
  WeightedDigraph digraph;
  Index self_loops_dropped = 0;
};

/// Reads "i j weight" directed triplets. Repeated (i, j) pairs accumulate.
WeightedLoad load_weighted_digraph(std::istream& in, std::optional<Index> n_hint = std::nullopt);
WeightedLoad load_weighted_digraph_file(const std::string& path,
                                        std::optional<Index> n_hint = std::nullopt);

struct ComponentExtraction {
  Graph graph;
  /// old id -> new id, or -1 when the node is outside the component.
  std::vector<Index> old_to_new;
  std::vector<Index> new_to_old;
};

/// Largest connected component; equal sizes resolve to the component whose
/// smallest node id is lowest.
ComponentExtraction largest_connected_component(const Graph& g);

/// Connected component id per node, numbered by increasing minimum node id.
std::vector<Index> connected_components(const Graph& g);

/// A_ij = 1 iff w_ij + w_ji >= q, q the lower empirical `percentile`-quantile
/// of the pair sums over i < j.
Graph symmetrize_and_threshold(const WeightedDigraph& w, double percentile);

}  // namespace blockgof

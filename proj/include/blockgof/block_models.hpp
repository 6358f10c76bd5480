#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "blockgof/graph.hpp"
#include "blockgof/types.hpp"

namespace blockgof {

/// Node -> community assignment with labels 0..k-1 (files use 1..k).
/// Every community is non-empty.
class Membership {
 public:
  Membership() = default;
  Membership(std::vector<int> labels, int k);

  /// Labels 1..k as written in membership files; k is the largest label.
  static Membership from_one_based(std::span<const int> labels);
  static Membership single_community(Index n);

  Index size() const noexcept { return static_cast<Index>(labels_.size()); }
  int communities() const noexcept { return k_; }
  int operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Inverse index: members of community u in increasing node order.
  std::span<const Index> members(int u) const {
    return {order_.data() + starts_[u], order_.data() + starts_[u + 1]};
  }
  Index community_size(int u) const { return starts_[u + 1] - starts_[u]; }
  std::vector<Index> sizes() const;
  Index smallest_community() const;

  /// Renumbers communities so first occurrences appear in increasing order.
  Membership canonical() const;
  /// Community u becomes tau[u].
  Membership relabeled(std::span<const int> tau) const;
  /// Node i becomes perm[i].
  Membership permuted(std::span<const Index> perm) const;

  friend bool operator==(const Membership& a, const Membership& b) {
    return a.k_ == b.k_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  int k_ = 0;
  std::vector<Index> order_;
  std::vector<Index> starts_{0};
};

/// Symmetric k x k matrix of edge probabilities in [0, 1].
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(MatrixX<double> probs);

  /// scale * (1 + boost * 1{u == v}); every matrix used in the simulations
  /// belongs to this family.
  static BlockMatrix planted(int k, double scale, double boost);
  static BlockMatrix constant(int k, double value);

  int communities() const noexcept { return static_cast<int>(probs_.rows()); }
  double operator()(int u, int v) const { return probs_(u, v); }
  const MatrixX<double>& matrix() const noexcept { return probs_; }
  bool strictly_inside_unit_interval() const;

 private:
  MatrixX<double> probs_;
};

/// Positive per-node degree multipliers.
class DegreeParams {
 public:
  DegreeParams() = default;
  explicit DegreeParams(VectorX<double> omega);
  static DegreeParams ones(Index n);

  Index size() const noexcept { return omega_.size(); }
  double operator[](Index i) const { return omega_(i); }
  const VectorX<double>& values() const noexcept { return omega_; }

  /// Per-community identifiability: sum of omega over community u equals
  /// its size, to `rel_tol` relative error.
  bool is_normalized(const Membership& sigma, double rel_tol = 1e-9) const;

 private:
  VectorX<double> omega_;
};

/// Ordered-pair counts: pairs(u, v) = #{(i, j): i != j, sigma(i) = u,
/// sigma(j) = v}; edges(u, v) the number of those with A_ij = 1.
struct BlockCounts {
  MatrixX<std::int64_t> pairs;
  MatrixX<std::int64_t> edges;
};

Membership sample_membership_balanced(Index n, int k, Rng& rng);
Membership sample_membership_multinomial(Index n, std::span<const double> pi, Rng& rng,
                                         std::size_t* resamples = nullptr);

Graph sample_sbm(const Membership& sigma, const BlockMatrix& b, Rng& rng);
Graph sample_dcsbm(const Membership& sigma, const BlockMatrix& b, const DegreeParams& omega,
                   Rng& rng);

/// omega_i = eta_i ~ U[4/5, 6/5] w.p. 0.8, 9/11 w.p. 0.1, 13/11 w.p. 0.1.
DegreeParams sample_degree_params_sim4(Index n, Rng& rng);

BlockCounts block_counts(const Graph& g, const Membership& sigma);

/// Maximum-likelihood block probabilities m_uv / n_uv.
BlockMatrix estimate_block_matrix(const Graph& g, const Membership& sigma0);

/// omega_i = |community| * d_i / (sum of degrees in the community).
DegreeParams estimate_degree_params(const Graph& g, const Membership& sigma0);

Membership read_membership(std::istream& in);
Membership read_membership_file(const std::string& path);
void write_membership(std::ostream& out, const Membership& sigma);

BlockMatrix read_block_matrix_csv(std::istream& in);
BlockMatrix read_block_matrix_csv_file(const std::string& path);
void write_block_matrix_csv(std::ostream& out, const BlockMatrix& b);

DegreeParams read_degree_params(std::istream& in);
DegreeParams read_degree_params_file(const std::string& path);
void write_degree_params(std::ostream& out, const DegreeParams& omega);

}  // namespace blockgof

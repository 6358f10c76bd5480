#pragma once

#include <cstdint>

#include "blockgof/block_models.hpp"
#include "blockgof/eigensolver.hpp"
#include "blockgof/graph.hpp"

namespace blockgof {

/// Which adjacency eigenvectors feed the clustering step.
enum class SpectralVariant {
  LargestMagnitude,  // k eigenvalues of largest |lambda| (default)
  LargestAlgebraic,  // k largest signed eigenvalues
};

struct ClusteringConfig {
  int restarts = 20;
  int max_iterations = 300;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  SpectralVariant variant = SpectralVariant::LargestMagnitude;

  void validate() const;
};

struct ClusteringOutcome {
  Membership membership;
  /// Leading eigenvalues used for the embedding.
  VectorX<double> eigenvalues;
  double kmeans_inertia = 0;
  /// SCORE rows whose leading-eigenvector entry was numerically zero.
  Index degenerate_rows = 0;
  int empty_cluster_reseeds = 0;
};

/// k leading adjacency eigenvectors of g, as columns.
EigenPairs<double> leading_eigenvectors(const Graph& g, Index k, SpectralVariant variant,
                                        std::uint64_t seed);

/// Adjacency spectral clustering: k-means on the rows of the n x k matrix of
/// leading eigenvectors. Labels are renumbered by first occurrence.
ClusteringOutcome spectral_clustering_detailed(const Graph& g, int k, const ClusteringConfig& cfg);
Membership spectral_clustering(const Graph& g, int k, const ClusteringConfig& cfg = {});

/// SCORE: k-means on entrywise ratios v_{l+1}[i] / v_1[i], clamped to
/// [-log n, log n].
ClusteringOutcome score_detailed(const Graph& g, int k, const ClusteringConfig& cfg);
Membership score(const Graph& g, int k, const ClusteringConfig& cfg = {});

}  // namespace blockgof

#include "blockgof/community.hpp"

#include <algorithm>
#include <cmath>

#include "blockgof/errors.hpp"
#include "blockgof/kmeans.hpp"

namespace blockgof {

void ClusteringConfig::validate() const {
  if (restarts < 1) throw DomainError("clustering restarts must be >= 1");
  if (max_iterations < 1) throw DomainError("clustering max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw DomainError("clustering tolerance must be >= 0");
}

namespace {

constexpr std::uint64_t kEigenStream = 0x6569676e73747265ULL;

void check_request(const Graph& g, int k) {
  if (k < 1) throw DomainError("community count must be positive");
  if (k > g.size())
    throw DomainError("cannot form " + std::to_string(k) + " communities from " +
                      std::to_string(g.size()) + " nodes");
}

KMeansOptions kmeans_options(const ClusteringConfig& cfg) {
  KMeansOptions opt;
  opt.restarts = cfg.restarts;
  opt.max_iterations = cfg.max_iterations;
  opt.tolerance = cfg.tolerance;
  opt.seed = mix_seed(cfg.seed);
  return opt;
}

ClusteringOutcome trivial(const Graph& g) {
  ClusteringOutcome out;
  out.membership = Membership::single_community(g.size());
  return out;
}

template <typename Derived>
ClusteringOutcome cluster_rows(const Eigen::MatrixBase<Derived>& embedding, int k,
                               const ClusteringConfig& cfg) {
  auto km = kmeans(embedding, k, kmeans_options(cfg));
  ClusteringOutcome out;
  out.membership = Membership(std::move(km.labels), k).canonical();
  out.kmeans_inertia = km.inertia;
  out.empty_cluster_reseeds = km.empty_cluster_reseeds;
  return out;
}

}  // namespace

EigenPairs<double> leading_eigenvectors(const Graph& g, Index k, SpectralVariant variant,
                                        std::uint64_t seed) {
  LanczosOptions opt;
  opt.seed = mix_seed(seed ^ kEigenStream);
  const auto end = variant == SpectralVariant::LargestMagnitude ? SpectrumEnd::LargestMagnitude
                                                                : SpectrumEnd::LargestAlgebraic;
  return lanczos_eigenpairs<double>(
      [&g](const VectorX<double>& x, VectorX<double>& y) { g.multiply(x, y); }, g.size(), k, opt,
      end);
}

ClusteringOutcome spectral_clustering_detailed(const Graph& g, int k, const ClusteringConfig& cfg) {
  cfg.validate();
  check_request(g, k);
  if (k == 1) return trivial(g);
  if (g.edge_count() == 0) throw DomainError("spectral clustering needs at least one edge");
  auto eig = leading_eigenvectors(g, k, cfg.variant, cfg.seed);
  auto out = cluster_rows(eig.vectors, k, cfg);
  out.eigenvalues = eig.values;
  return out;
}

Membership spectral_clustering(const Graph& g, int k, const ClusteringConfig& cfg) {
  return spectral_clustering_detailed(g, k, cfg).membership;
}

ClusteringOutcome score_detailed(const Graph& g, int k, const ClusteringConfig& cfg) {
  cfg.validate();
  check_request(g, k);
  if (k == 1) return trivial(g);
  if (g.edge_count() == 0) throw DomainError("SCORE needs at least one edge");
  auto eig = leading_eigenvectors(g, k, SpectralVariant::LargestMagnitude, cfg.seed);

  const Index n = g.size();
  const double bound = std::log(static_cast<double>(n));
  MatrixX<double> ratios(n, k - 1);
  Index degenerate = 0;
  for (Index i = 0; i < n; ++i) {
    double lead = eig.vectors(i, 0);
    if (std::abs(lead) < 1e-12) {
      ++degenerate;
      lead = std::copysign(1e-12, lead);
    }
    for (Index l = 1; l < k; ++l)
      ratios(i, l - 1) = std::clamp(eig.vectors(i, l) / lead, -bound, bound);
  }
  auto out = cluster_rows(ratios, k, cfg);
  out.eigenvalues = eig.values;
  out.degenerate_rows = degenerate;
  return out;
}

Membership score(const Graph& g, int k, const ClusteringConfig& cfg) {
  return score_detailed(g, k, cfg).membership;
}

}  // namespace blockgof

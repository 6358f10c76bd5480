#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "blockgof/errors.hpp"
#include "blockgof/types.hpp"

namespace blockgof {

struct KMeansOptions {
  int restarts = 20;
  int max_iterations = 300;
  /// Lloyd stops when no label changes or the largest squared centre
  /// displacement falls to this value.
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  /// Re-seedings allowed per restart when Lloyd empties a cluster.
  int max_reseeds = 16;
};

template <typename Scalar>
struct KMeansResult {
  std::vector<int> labels;
  MatrixX<Scalar> centers;  // k x d
  Scalar inertia = std::numeric_limits<Scalar>::infinity();
  int best_restart = -1;
  int empty_cluster_reseeds = 0;
};

namespace detail {

template <typename Derived, typename Scalar = typename Derived::Scalar>
MatrixX<Scalar> kmeanspp_seed(const Eigen::MatrixBase<Derived>& x, int k, Rng& rng) {
  const Index n = x.rows();
  MatrixX<Scalar> centers(k, x.cols());
  auto first = static_cast<Index>(uniform01(rng) * static_cast<double>(n));
  centers.row(0) = x.row(std::min(first, n - 1));
  VectorX<Scalar> d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const Scalar total = d2.sum();
    if (!(total > Scalar(0)))
      throw DomainError("k-means needs at least k distinct points");
    const Scalar target = Scalar(uniform01(rng)) * total;
    Scalar acc = 0;
    Index pick = -1;
    for (Index i = 0; i < n; ++i) {
      if (d2(i) <= Scalar(0)) continue;
      acc += d2(i);
      pick = i;
      if (acc > target) break;
    }
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding over the rows of `x`. The
/// restart with the lowest within-cluster sum of squares wins, earlier
/// restarts winning ties. A run that empties a cluster is re-seeded.
template <typename Derived>
KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& x, int k,
                                              const KMeansOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.rows();
  if (k < 1 || k > n) throw DomainError("k-means cluster count must lie in [1, n]");
  if (opt.restarts < 1 || opt.max_iterations < 1 || opt.tolerance < 0)
    throw DomainError("invalid k-means options");

  KMeansResult<Scalar> best;
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<Index> counts(static_cast<std::size_t>(k));
  MatrixX<Scalar> centers, next;

  for (int r = 0; r < opt.restarts; ++r) {
    bool done = false;
    for (int attempt = 0; attempt <= opt.max_reseeds && !done; ++attempt) {
      Rng rng(mix_seed(opt.seed ^ mix_seed((static_cast<std::uint64_t>(r) << 20) + attempt)));
      centers = detail::kmeanspp_seed(x, k, rng);
      std::fill(labels.begin(), labels.end(), -1);
      bool empty = false;
      Scalar inertia = 0;
      for (int it = 0; it < opt.max_iterations; ++it) {
        bool changed = false;
        inertia = 0;
        for (Index i = 0; i < n; ++i) {
          int arg = 0;
          Scalar bestd = (x.row(i) - centers.row(0)).squaredNorm();
          for (int c = 1; c < k; ++c) {
            const Scalar d = (x.row(i) - centers.row(c)).squaredNorm();
            if (d < bestd) {
              bestd = d;
              arg = c;
            }
          }
          inertia += bestd;
          if (labels[i] != arg) {
            labels[i] = arg;
            changed = true;
          }
        }
        if (!changed) break;
        next = MatrixX<Scalar>::Zero(k, x.cols());
        std::fill(counts.begin(), counts.end(), 0);
        for (Index i = 0; i < n; ++i) {
          next.row(labels[i]) += x.row(i);
          ++counts[labels[i]];
        }
        for (int c = 0; c < k && !empty; ++c) empty = counts[c] == 0;
        if (empty) break;
        for (int c = 0; c < k; ++c) next.row(c) /= Scalar(counts[c]);
        const Scalar shift = (next - centers).rowwise().squaredNorm().maxCoeff();
        centers.swap(next);
        if (shift <= Scalar(opt.tolerance)) {
          // Final assignment against the settled centres.
          inertia = 0;
          for (Index i = 0; i < n; ++i) {
            int arg = 0;
            Scalar bestd = (x.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
              const Scalar d = (x.row(i) - centers.row(c)).squaredNorm();
              if (d < bestd) {
                bestd = d;
                arg = c;
              }
            }
            inertia += bestd;
            labels[i] = arg;
          }
          break;
        }
      }
      if (!empty) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int l : labels) ++counts[l];
        for (int c = 0; c < k && !empty; ++c) empty = counts[c] == 0;
      }
      if (empty) {
        ++best.empty_cluster_reseeds;
        continue;
      }
      done = true;
      if (inertia < best.inertia) {
        best.inertia = inertia;
        best.labels = labels;
        best.centers = centers;
        best.best_restart = r;
      }
    }
  }
  if (best.best_restart < 0)
    throw NumericError("k-means could not produce k non-empty clusters");
  return best;
}

}  // namespace blockgof

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "blockgof/errors.hpp"
#include "blockgof/types.hpp"

namespace blockgof {

struct LanczosOptions {
  /// Ritz pairs are accepted once ||A x - theta x|| <= tolerance * max|theta|.
  double tolerance = 1e-8;
  /// Krylov dimension at which Lanczos gives up and the dense solver runs.
  Index max_subspace = 600;
  /// Problems up to this size go straight to the dense solver.
  Index dense_threshold = 160;
  std::uint64_t seed = 0x5eed;
};

template <typename Scalar>
struct EigenPairs {
  VectorX<Scalar> values;   // ordered by decreasing |value|
  MatrixX<Scalar> vectors;  // unit-norm columns
  Index krylov_dimension = 0;
  bool dense = false;
};

namespace detail {

/// Indices of the k entries with largest magnitude; ties prefer the larger
/// signed value so that the selection is deterministic.
template <typename Scalar>
std::vector<Index> largest_magnitude_indices(const VectorX<Scalar>& values, Index k) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const Scalar ma = std::abs(values(a)), mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    return values(a) > values(b);
  });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

template <typename Scalar>
std::vector<Index> largest_algebraic_indices(const VectorX<Scalar>& values, Index k) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

template <typename Scalar>
void random_unit(VectorX<Scalar>& v, Rng& rng) {
  for (Index i = 0; i < v.size(); ++i) v(i) = Scalar(uniform01(rng) - 0.5);
  v.normalize();
}

// Eigenvector sign is fixed so that the entry of largest magnitude is positive.
template <typename Scalar>
void fix_signs(MatrixX<Scalar>& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < Scalar(0)) vectors.col(c) = -vectors.col(c);
  }
}

}  // namespace detail

enum class SpectrumEnd { LargestMagnitude, LargestAlgebraic };

/// Selected eigenpairs of a dense symmetric matrix via a full decomposition.
template <typename Derived>
EigenPairs<typename Derived::Scalar> dense_eigenpairs(const Eigen::MatrixBase<Derived>& a, Index k,
                                                      SpectrumEnd end = SpectrumEnd::LargestMagnitude) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(a.derived());
  if (solver.info() != Eigen::Success) throw NumericError("dense symmetric eigensolver failed");
  const VectorX<Scalar>& all = solver.eigenvalues();
  auto idx = end == SpectrumEnd::LargestMagnitude ? detail::largest_magnitude_indices(all, k)
                                                  : detail::largest_algebraic_indices(all, k);
  EigenPairs<Scalar> out;
  out.values.resize(k);
  out.vectors.resize(a.rows(), k);
  for (Index c = 0; c < k; ++c) {
    out.values(c) = all(idx[c]);
    out.vectors.col(c) = solver.eigenvectors().col(idx[c]);
  }
  detail::fix_signs(out.vectors);
  out.krylov_dimension = a.rows();
  out.dense = true;
  return out;
}

/// k extreme eigenpairs of the symmetric operator `apply(x, y)` (y = A x) of
/// size n. Lanczos with full reorthogonalisation; invariant subspaces are
/// escaped by restarting from a fresh random direction, which also resolves
/// repeated eigenvalues. Falls back to a dense decomposition when the Krylov
/// basis reaches `max_subspace` without convergence.
template <typename Scalar, typename Apply>
EigenPairs<Scalar> lanczos_eigenpairs(Apply&& apply, Index n, Index k,
                                      const LanczosOptions& opt = {},
                                      SpectrumEnd end = SpectrumEnd::LargestMagnitude) {
  if (k < 1 || k > n) throw DomainError("requested eigenpair count must lie in [1, n]");

  auto dense_fallback = [&]() {
    MatrixX<Scalar> a(n, n);
    VectorX<Scalar> e = VectorX<Scalar>::Zero(n), col(n);
    for (Index j = 0; j < n; ++j) {
      e(j) = Scalar(1);
      apply(e, col);
      a.col(j) = col;
      e(j) = Scalar(0);
    }
    return dense_eigenpairs(a, k, end);
  };
  if (n <= opt.dense_threshold) return dense_fallback();

  const Index cap = std::min(n, std::max(opt.max_subspace, 4 * k + 40));
  Rng rng(opt.seed);
  MatrixX<Scalar> basis(n, std::min(cap, 2 * k + 64));
  std::vector<Scalar> alpha, beta;
  VectorX<Scalar> v(n), w(n), coeff;
  detail::random_unit(v, rng);
  basis.col(0) = v;

  auto orthogonalise = [&](VectorX<Scalar>& x, Index cols) {
    for (int pass = 0; pass < 2; ++pass) {
      coeff.noalias() = basis.leftCols(cols).transpose() * x;
      x.noalias() -= basis.leftCols(cols) * coeff;
    }
  };

  Scalar norm_estimate = 0;
  const Index first_check = std::min(cap, 2 * k + 20);
  for (Index j = 0;; ++j) {
    v = basis.col(j);
    apply(v, w);
    const Scalar a_j = v.dot(w);
    alpha.push_back(a_j);
    w.noalias() -= a_j * basis.col(j);
    if (j > 0) w.noalias() -= beta.back() * basis.col(j - 1);
    orthogonalise(w, j + 1);
    Scalar b_j = w.norm();
    norm_estimate = std::max(norm_estimate, std::abs(a_j) + b_j);
    const Index m = j + 1;

    bool breakdown = b_j <= Scalar(1e-12) * std::max(norm_estimate, Scalar(1));
    if ((m >= first_check && (m - first_check) % 10 == 0) || m == cap || breakdown) {
      Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> tri;
      VectorX<Scalar> diag = Eigen::Map<VectorX<Scalar>>(alpha.data(), m);
      VectorX<Scalar> sub = m > 1 ? VectorX<Scalar>(Eigen::Map<VectorX<Scalar>>(beta.data(), m - 1))
                                  : VectorX<Scalar>();
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      if (tri.info() != Eigen::Success) throw NumericError("tridiagonal eigensolver failed");
      if (m >= k) {
        const VectorX<Scalar>& theta = tri.eigenvalues();
        auto idx = end == SpectrumEnd::LargestMagnitude
                       ? detail::largest_magnitude_indices(theta, k)
                       : detail::largest_algebraic_indices(theta, k);
        const Scalar scale = std::max(theta.cwiseAbs().maxCoeff(), Scalar(1e-300));
        bool converged = true;
        for (Index c = 0; c < k && converged; ++c)
          converged = std::abs(b_j * tri.eigenvectors()(m - 1, idx[c])) <=
                      Scalar(opt.tolerance) * scale;
        // An exhausted Krylov space (m == n) is exact.
        if (converged && (!breakdown || m == n)) {
          EigenPairs<Scalar> out;
          out.values.resize(k);
          out.vectors.resize(n, k);
          for (Index c = 0; c < k; ++c) {
            out.values(c) = theta(idx[c]);
            out.vectors.col(c).noalias() = basis.leftCols(m) * tri.eigenvectors().col(idx[c]);
            out.vectors.col(c).normalize();
          }
          detail::fix_signs(out.vectors);
          out.krylov_dimension = m;
          return out;
        }
      }
      if (m >= cap) return dense_fallback();
    }

    if (m >= basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min(cap, 2 * basis.cols()));
    if (breakdown) {
      // Invariant subspace found: continue from a new direction orthogonal
      // to the basis; the zero coupling keeps T block diagonal.
      b_j = 0;
      for (int tries = 0; tries < 8; ++tries) {
        detail::random_unit(w, rng);
        orthogonalise(w, m);
        if (w.norm() > Scalar(1e-8)) break;
      }
      w.normalize();
    } else {
      w /= b_j;
    }
    beta.push_back(b_j);
    basis.col(m) = w;
  }
}

}  // namespace blockgof

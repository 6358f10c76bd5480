#pragma once

// Direct loop-over-pairs evaluations used as test oracles. They follow the
// defining sums literally, with long double accumulation.

#include <algorithm>
#include <cmath>
#include <vector>

#include "blockgof/block_models.hpp"
#include "blockgof/gof_test.hpp"
#include "blockgof/graph.hpp"

namespace naive {

using namespace blockgof;

inline MatrixX<double> field(const Graph& g, const Membership& s0,
                             const std::vector<std::vector<double>>& prob) {
  const Index n = g.size();
  const auto a = g.adjacency();
  const double eps = clamp_epsilon(n);
  MatrixX<double> rho(n, s0.communities());
  for (Index i = 0; i < n; ++i) {
    for (int v = 0; v < s0.communities(); ++v) {
      long double sum = 0;
      Index count = 0;
      for (Index j = 0; j < n; ++j) {
        if (j == i || s0[j] != v) continue;
        const double p = std::clamp(prob[i][j], eps, 1 - eps);
        sum += (a(i, j) - p) / std::sqrt(static_cast<long double>(p) * (1 - p));
        ++count;
      }
      rho(i, v) = static_cast<double>(sum / std::sqrt(static_cast<long double>(count)));
    }
  }
  return rho;
}

inline BlockMatrix mle(const Graph& g, const Membership& s0) {
  const int k = s0.communities();
  MatrixX<double> m = MatrixX<double>::Zero(k, k), pairs = MatrixX<double>::Zero(k, k);
  const auto a = g.adjacency();
  for (Index i = 0; i < g.size(); ++i)
    for (Index j = 0; j < g.size(); ++j)
      if (i != j) {
        m(s0[i], s0[j]) += a(i, j);
        pairs(s0[i], s0[j]) += 1;
      }
  return BlockMatrix(m.cwiseQuotient(pairs));
}

inline MatrixX<double> sbm_field(const Graph& g, const Membership& s0, const BlockMatrix& b) {
  const Index n = g.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) p[i][j] = b(s0[i], s0[j]);
  return field(g, s0, p);
}

inline MatrixX<double> dcsbm_field(const Graph& g, const Membership& s0, const BlockMatrix& b,
                                   const DegreeParams& w) {
  const Index n = g.size();
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) p[i][j] = w[i] * w[j] * b(s0[i], s0[j]);
  return field(g, s0, p);
}

inline double max_abs(const MatrixX<double>& rho) {
  double best = 0;
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index v = 0; v < rho.cols(); ++v) best = std::max(best, std::abs(rho(i, v)));
  return best;
}

inline MatrixX<double> average(const Membership& s, const BlockMatrix& b, const Membership& s0) {
  const int k0 = s0.communities();
  MatrixX<long double> sum = MatrixX<long double>::Zero(k0, k0);
  MatrixX<long double> count = MatrixX<long double>::Zero(k0, k0);
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = 0; j < s.size(); ++j)
      if (i != j) {
        sum(s0[i], s0[j]) += b(s[i], s[j]);
        count(s0[i], s0[j]) += 1;
      }
  return sum.cwiseQuotient(count).cast<double>();
}

inline double ell(const Membership& s, const BlockMatrix& b, const Membership& s0) {
  const auto b0 = average(s, b, s0);
  double best = 0;
  for (Index i = 0; i < s.size(); ++i)
    for (int v = 0; v < s0.communities(); ++v) {
      long double sum = 0;
      Index count = 0;
      for (Index j = 0; j < s.size(); ++j) {
        if (j == i || s0[j] != v) continue;
        const long double p = b(s[i], s[j]);
        sum += (p - b0(s0[i], s0[j])) / std::sqrt(p * (1 - p));
        ++count;
      }
      best = std::max(best, static_cast<double>(std::abs(sum) / std::sqrt(static_cast<long double>(count))));
    }
  return best;
}

inline double r_max(const Membership& s, const BlockMatrix& b, const Membership& s0) {
  const auto b0 = average(s, b, s0);
  double best = 0;
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const double p = b(s[i], s[j]), q = b0(s0[i], s0[j]);
      best = std::max(best, std::sqrt(q * (1 - q)) / std::sqrt(p * (1 - p)));
    }
  return best;
}

}  // namespace naive

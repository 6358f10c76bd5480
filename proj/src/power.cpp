#include "blockgof/power.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "blockgof/errors.hpp"
#include "blockgof/exact_sum.hpp"

namespace blockgof {

namespace {

void check_inputs(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0) {
  if (sigma.size() != sigma0.size()) throw DomainError("memberships differ in length");
  if (b.communities() != sigma.communities())
    throw DomainError("block matrix and true membership disagree on community count");
  if (sigma0.smallest_community() < 2)
    throw DomainError("hypothesised membership has a singleton community");
}

void check_interior(const BlockMatrix& b) {
  if (!b.strictly_inside_unit_interval())
    throw DomainError("population block matrix must lie strictly inside (0, 1)");
}

}  // namespace

BlockMatrix blockwise_average(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0) {
  check_inputs(sigma, b, sigma0);
  const int k = sigma.communities(), k0 = sigma0.communities();
  // joint(u0, a): nodes with sigma0 = u0 and sigma = a. Ordered pair counts
  // per (u0, v0, a, b) follow exactly in integers.
  MatrixX<std::int64_t> joint = MatrixX<std::int64_t>::Zero(k0, k);
  for (Index i = 0; i < sigma.size(); ++i) ++joint(sigma0[i], sigma[i]);
  MatrixX<double> avg(k0, k0);
  for (int u = 0; u < k0; ++u)
    for (int v = u; v < k0; ++v) {
      const auto nu = sigma0.community_size(u), nv = sigma0.community_size(v);
      const double total = static_cast<double>(u == v ? nu * (nu - 1) : nu * nv);
      double mean = 0;
      for (int a = 0; a < k; ++a)
        for (int c = 0; c < k; ++c) {
          std::int64_t pairs = joint(u, a) * joint(v, c);
          if (u == v && a == c) pairs -= joint(u, a);
          if (pairs > 0) mean += (static_cast<double>(pairs) / total) * b(a, c);
        }
      avg(u, v) = avg(v, u) = std::min(1.0, mean);
    }
  return BlockMatrix(avg);
}

double separation_ell(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0) {
  check_inputs(sigma, b, sigma0);
  check_interior(b);
  const BlockMatrix b0 = blockwise_average(sigma, b, sigma0);
  const int k = sigma.communities(), k0 = sigma0.communities();
  // Row i depends only on (sigma0(i), sigma(i)); the terms for j depend only
  // on (sigma0(j), sigma(j)), so each row sum is a weighted sum of k values.
  MatrixX<Index> joint = MatrixX<Index>::Zero(k0, k);
  for (Index i = 0; i < sigma.size(); ++i) ++joint(sigma0[i], sigma[i]);
  double best = 0;
  for (int u0 = 0; u0 < k0; ++u0)
    for (int u = 0; u < k; ++u) {
      if (joint(u0, u) == 0) continue;
      for (int v0 = 0; v0 < k0; ++v0) {
        ExactSum acc;
        for (int a = 0; a < k; ++a) {
          const Index count = joint(v0, a) - (v0 == u0 && a == u ? 1 : 0);
          if (count == 0) continue;
          const double p = b(u, a);
          acc.add_product(static_cast<double>(count), (p - b0(u0, v0)) / std::sqrt(p * (1.0 - p)));
        }
        const double others = static_cast<double>(sigma0.community_size(v0) - (v0 == u0 ? 1 : 0));
        best = std::max(best, std::abs(acc.value()) / std::sqrt(others));
      }
    }
  return best;
}

double ratio_bound(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0) {
  check_inputs(sigma, b, sigma0);
  check_interior(b);
  const BlockMatrix b0 = blockwise_average(sigma, b, sigma0);
  const int k = sigma.communities(), k0 = sigma0.communities();
  const Index n = sigma.size();
  // Only the (sigma0, sigma) block pair of i and j matters; record which
  // combinations occur among ordered pairs i != j.
  MatrixX<Index> joint = MatrixX<Index>::Zero(k0, k);
  for (Index i = 0; i < n; ++i) ++joint(sigma0[i], sigma[i]);
  double best = 0;
  for (int u0 = 0; u0 < k0; ++u0)
    for (int u = 0; u < k; ++u) {
      if (joint(u0, u) == 0) continue;
      for (int v0 = 0; v0 < k0; ++v0)
        for (int v = 0; v < k; ++v) {
          const Index partners = joint(v0, v) - (u0 == v0 && u == v ? 1 : 0);
          if (partners <= 0) continue;
          const double p = b(u, v), q = b0(u0, v0);
          best = std::max(best, std::sqrt(q * (1.0 - q)) / std::sqrt(p * (1.0 - p)));
        }
    }
  return best;
}

AlternativeAssessment assess_alternative(const Membership& sigma, const BlockMatrix& b,
                                         const Membership& sigma0, double gamma) {
  if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1");
  AlternativeAssessment a;
  a.gamma = gamma;
  a.ell = separation_ell(sigma, b, sigma0);
  a.r_max = ratio_bound(sigma, b, sigma0);
  const double m = 2.0 * sigma0.communities() * static_cast<double>(sigma.size());
  a.threshold = std::sqrt(2.0 * std::log(m)) * (1.0 + gamma * a.r_max);
  a.in_class = a.ell >= a.threshold;
  return a;
}

double er_separation_asymptotic(Index n, double p, double q) {
  if (!(p > 0 && p < 1 && q > 0 && q < 1)) throw DomainError("p and q must lie in (0, 1)");
  return std::sqrt(static_cast<double>(n)) * std::abs(p - q) / 4.0 *
         std::abs(1.0 / std::sqrt(q * (1.0 - q)) - 1.0 / std::sqrt(p * (1.0 - p)));
}

}  // namespace blockgof

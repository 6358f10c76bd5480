#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "blockgof/errors.hpp"

namespace blockgof {

/// Limiting null law of the centred squared maximum deviation: Gumbel with
/// location -2 log(2 sqrt(pi)) and scale 2, i.e.
///   F(y) = exp(-exp(-y / 2) / (2 sqrt(pi))).
template <typename Scalar = double>
struct GumbelNull {
  static Scalar location() { return Scalar(-2) * std::log(Scalar(2) * std::sqrt(std::numbers::pi_v<Scalar>)); }
  static constexpr Scalar scale() { return Scalar(2); }

  static Scalar cdf(Scalar y) { return std::exp(-tail_rate(y)); }
  /// 1 - F(y), accurate in the upper tail.
  static Scalar sf(Scalar y) { return -std::expm1(-tail_rate(y)); }

  static Scalar quantile(Scalar p) {
    if (!(p > Scalar(0) && p < Scalar(1)))
      throw DomainError("Gumbel quantile requires p in (0, 1)");
    return location() - scale() * std::log(-std::log(p));
  }

 private:
  static Scalar tail_rate(Scalar y) {
    return std::exp(-y / scale()) / (Scalar(2) * std::sqrt(std::numbers::pi_v<Scalar>));
  }
};

template <typename Scalar>
Scalar gumbel_cdf(Scalar y) { return GumbelNull<Scalar>::cdf(y); }

template <typename Scalar>
Scalar gumbel_quantile(Scalar p) { return GumbelNull<Scalar>::quantile(p); }

/// Two-sided p-value 2 min(F, 1 - F), capped at 1.
template <typename Scalar>
Scalar gumbel_two_sided_p(Scalar y) {
  return std::min(Scalar(1), Scalar(2) * std::min(GumbelNull<Scalar>::cdf(y), GumbelNull<Scalar>::sf(y)));
}

/// Kolmogorov-Smirnov distance sup |F_n - F| between the empirical CDF of
/// `sample` and a continuous CDF.
template <typename Scalar, typename Cdf>
Scalar ks_distance(std::span<const Scalar> sample, Cdf&& cdf) {
  if (sample.size() < 1) throw DomainError("KS distance needs a non-empty sample");
  std::vector<Scalar> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<Scalar>(sorted.size());
  Scalar d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Scalar f = cdf(sorted[i]);
    d = std::max({d, Scalar(i + 1) / n - f, f - Scalar(i) / n});
  }
  return d;
}

}  // namespace blockgof

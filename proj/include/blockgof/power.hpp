#pragma once

#include "blockgof/block_models.hpp"

namespace blockgof {

/// Where a hypothesised (k0, sigma0) sits relative to the alternative class
///   ell >= sqrt(2 log(2 k0 n)) (1 + gamma r_max).
struct AlternativeAssessment {
  double ell = 0;
  double r_max = 0;
  double threshold = 0;
  double gamma = 0;
  bool in_class = false;
};

/// Pair-averaged true probabilities over the blocks of sigma0:
///   off-diagonal  (1 / (|u||v|))     sum_{i in u, j in v} B_{sigma(i) sigma(j)}
///   diagonal      (1 / (|u|(|u|-1))) sum_{i != j in u}    B_{sigma(i) sigma(j)}
BlockMatrix blockwise_average(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0);

/// max_{i, v} | |S_v \ {i}|^{-1/2} sum_{j in S_v \ {i}} (B_ij - B0_ij) / sqrt(B_ij (1 - B_ij)) |
/// with B_ij = B_{sigma(i) sigma(j)} and B0 the blockwise average.
double separation_ell(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0);

/// max over i != j of sqrt(B0_ij (1 - B0_ij)) / sqrt(B_ij (1 - B_ij)).
double ratio_bound(const Membership& sigma, const BlockMatrix& b, const Membership& sigma0);

AlternativeAssessment assess_alternative(const Membership& sigma, const BlockMatrix& b,
                                         const Membership& sigma0, double gamma);

/// Large-n separation of a balanced two-block model (p within, q across)
/// from the one-community fit: sqrt(n) |p - q| / 4 * |1/sqrt(q(1-q)) - 1/sqrt(p(1-p))|.
double er_separation_asymptotic(Index n, double p, double q);

}  // namespace blockgof

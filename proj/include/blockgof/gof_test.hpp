#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "blockgof/block_models.hpp"
#include "blockgof/community.hpp"
#include "blockgof/graph.hpp"
#include "blockgof/gumbel.hpp"

namespace blockgof {

/// Which centred statistic a report carries.
///   Tn  : SBM deviations with the MLE block matrix.
///   Tn1 : DCSBM deviations with known degree parameters.
///   Tn2 : DCSBM deviations with estimated degree parameters.
///   Tn3 : Tn2 with L rescaled by sqrt((k0 + 1) / k0).
enum class StatisticVariant { Tn, Tn1, Tn2, Tn3 };

enum class ModelKind { Sbm, Dcsbm };

enum class DeviationModel { Sbm, DcsbmKnownOmega, DcsbmEstimatedOmega };

enum class MembershipSource { Supplied, SpectralClustering, Score };

std::string_view to_string(StatisticVariant v);
std::string_view to_string(ModelKind m);
std::string_view to_string(DeviationModel m);
std::string_view to_string(MembershipSource s);
StatisticVariant parse_statistic_variant(std::string_view text);
ModelKind parse_model_kind(std::string_view text);

/// Standardised node-versus-community residual sums, n x k0:
///   rho(i, v) = |S_v \ {i}|^{-1/2} sum_{j in S_v \ {i}} (A_ij - p_ij) / sqrt(p_ij (1 - p_ij))
/// with S_v the members of community v and p_ij the fitted edge probability.
struct DeviationField {
  MatrixX<double> rho;
  DeviationModel model = DeviationModel::Sbm;
  /// Number of (i, j) terms whose fitted probability was clamped into
  /// [eps, 1 - eps], eps = 1 / (2 n^2).
  std::int64_t clamp_events = 0;
};

/// Clamp width for degenerate fitted probabilities.
inline double clamp_epsilon(Index n) {
  const auto nn = static_cast<double>(n);
  return 1.0 / (2.0 * nn * nn);
}

DeviationField deviation_field_sbm(const Graph& g, const Membership& sigma0, const BlockMatrix& bhat);

DeviationField deviation_field_dcsbm(const Graph& g, const Membership& sigma0,
                                     const BlockMatrix& bhat, const DegreeParams& omega,
                                     bool omega_is_estimated);

/// max_{i, v} |rho(i, v)|.
double statistic_L(const DeviationField& field);

/// L^2 - 2 log(2 k0 n) + log log(2 k0 n); for Tn3 L is first scaled by
/// sqrt((k0 + 1) / k0).
double statistic_T(double L, int k0, Index n, StatisticVariant variant);

struct TestReport {
  double statistic = 0;
  /// Unscaled maximum deviation (L_n, L_n1 or L_n2).
  double L = 0;
  StatisticVariant variant = StatisticVariant::Tn;
  int k0 = 0;
  Index n = 0;
  double alpha = 0.05;
  double lower_critical = 0;
  double upper_critical = 0;
  bool reject = false;
  double p_value = 1;
  std::int64_t clamp_events = 0;
  MembershipSource membership_source = MembershipSource::Supplied;
  /// Tn2 alongside a Tn3 decision; NaN for other variants.
  double tn2_diagnostic = std::numeric_limits<double>::quiet_NaN();
};

/// Two-sided Gumbel decision for an already computed statistic.
TestReport decide(double statistic, double L, StatisticVariant variant, int k0, Index n,
                  double alpha, std::int64_t clamp_events);

/// Evaluates one statistic variant at a fixed membership. Tn1 needs
/// `known_omega`; Tn2/Tn3 estimate omega from the graph.
TestReport evaluate_membership(const Graph& g, const Membership& sigma0, double alpha,
                               StatisticVariant variant,
                               const DegreeParams* known_omega = nullptr);

/// H0: k = k0. Labels come from spectral clustering (SBM, Tn) or SCORE
/// (DCSBM, Tn3 with Tn2 as diagnostic).
TestReport test_num_communities(const Graph& g, int k0, double alpha, ModelKind model,
                                const ClusteringConfig& cfg = {});

/// H0: sigma = sigma0, k0 taken from sigma0.
TestReport test_membership(const Graph& g, const Membership& sigma0, double alpha,
                           ModelKind model);

}  // namespace blockgof

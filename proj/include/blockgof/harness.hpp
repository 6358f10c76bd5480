#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "blockgof/block_models.hpp"
#include "blockgof/gof_test.hpp"

namespace blockgof {

/// Experiment identifiers understood by run_experiment.
const std::vector<std::string>& experiment_ids();

struct ExperimentSpec {
  std::string id;
  int replications = 200;
  std::uint64_t base_seed = 20190101;
  double alpha = 0.05;
  /// Parameter overrides; numeric lists are comma separated ("2,4,6").
  std::map<std::string, std::string> overrides;
  /// Worker count; 0 picks default_thread_count().
  int threads = 0;

  void validate() const;
};

/// Parameter names an experiment accepts with their default values.
std::map<std::string, std::string> experiment_parameters(const std::string& id);

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

struct ResultRow {
  std::string experiment_id;
  int k = 0;  // 0 when the truth is unknown (real data)
  int k0 = 0;
  Index n = 0;
  double r = kNotApplicable;
  double z = kNotApplicable;
  StatisticVariant variant = StatisticVariant::Tn;
  double rejection_rate = 0;
  double stderr_ = 0;
  double ks_stat = kNotApplicable;
  std::int64_t clamp_total = 0;
  std::uint64_t seed = 0;
  int replications = 0;
  /// Replications where no statistic exists (a fitted community of size one
  /// or an isolated node); these count as rejections.
  int failures = 0;
  /// Statistic per successful replication, in replication order.
  std::vector<double> statistics;
};

struct LabelledReport {
  std::string label;
  TestReport report;
};

struct ExperimentResult {
  std::string id;
  std::vector<ResultRow> rows;
  std::vector<LabelledReport> reports;  // real-data runs only
  double runtime_seconds = 0;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Kolmogorov-Smirnov distance between the empirical law of `sample` and
/// the Gumbel null.
double ks_distance_to_gumbel(std::span<const double> sample);

/// Moves exactly ceil(z n) distinct, uniformly chosen nodes to a uniformly
/// chosen different community. Draws that would empty a community are
/// redrawn.
Membership corrupt_labels(const Membership& sigma, double z, Rng& rng);

/// Number of nodes corrupt_labels moves.
Index corrupted_count(Index n, double z);

}  // namespace blockgof

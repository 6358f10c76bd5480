#include "blockgof/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "blockgof/community.hpp"
#include "blockgof/errors.hpp"
#include "blockgof/gumbel.hpp"
#include "blockgof/parallel.hpp"

namespace blockgof {

namespace {

using Params = std::map<std::string, std::string>;

const std::map<std::string, Params>& parameter_table() {
  static const std::map<std::string, Params> table = {
      {"sim1", {{"n", "500"}, {"k", "3"}, {"scale", "0.1"}, {"boost", "2"}}},
      {"sim2-grid",
       {{"block_size", "200"},
        {"k", "2,4,6,8,10,20,30,40"},
        {"k0", "2,4,6,8,10,20,30,40"},
        {"scale", "0.1"},
        {"boost", "4"}}},
      {"sim2-r-sweep",
       {{"block_size", "200"},
        {"k", "3"},
        {"r", "0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1"},
        {"boost", "2"}}},
      {"sim3-type1", {{"block_size", "200"}, {"k", "2,3,4,5,6,7,8"}, {"scale", "0.1"}, {"boost", "2"}}},
      {"sim3-power",
       {{"block_size", "100,200"}, {"k", "2"}, {"r", "0.05,0.1"}, {"z", "0.01,0.05,0.1"}, {"boost", "2"}}},
      {"sim4", {{"n", "500"}, {"k", "3"}, {"scale", "0.1"}, {"boost", "2"}}},
      {"sim5",
       {{"block_size", "200"}, {"k", "2,3,4,5,6,7,8"}, {"k0", "2,3,4,5,6,7,8"}, {"scale", "0.1"}, {"boost", "2"}}},
      {"sim6", {{"block_size", "200"}, {"k", "2,3,4,5,6,7,8"}, {"scale", "0.1"}, {"boost", "2"}}},
      {"supp-er-power",
       {{"block_size", "200,400,800,1600,3200,6400"}, {"r", "3,4,5,6,7"}, {"scale", "0.1"}}},
      {"data-trade", {{"file", ""}, {"percentile", "0.5"}, {"k0", "3,7,10"}}},
      {"data-polblogs", {{"edges", ""}, {"labels", ""}, {"sbm_k0", "10"}, {"dcsbm_k0", "2"}}},
  };
  return table;
}

std::string join_ids() {
  std::string out;
  for (const auto& id : experiment_ids()) out += (out.empty() ? "" : ", ") + id;
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw ConfigError("parameter '" + key + "': '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("parameter '" + key + "' is empty");
  return out;
}

class Parameters {
 public:
  explicit Parameters(const ExperimentSpec& spec) : values_(experiment_parameters(spec.id)) {
    for (const auto& [key, value] : spec.overrides) values_[key] = value;
  }

  std::vector<double> reals(const std::string& key) const { return parse_list(key, values_.at(key)); }

  double real(const std::string& key) const {
    auto v = reals(key);
    if (v.size() != 1) throw ConfigError("parameter '" + key + "' takes a single value");
    return v[0];
  }

  std::vector<int> ints(const std::string& key, int lo) const {
    std::vector<int> out;
    for (double v : reals(key)) {
      if (v != std::floor(v) || v < lo || v > 1e7)
        throw ConfigError("parameter '" + key + "' needs integers >= " + std::to_string(lo));
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  int integer(const std::string& key, int lo) const {
    auto v = ints(key, lo);
    if (v.size() != 1) throw ConfigError("parameter '" + key + "' takes a single value");
    return v[0];
  }

  const std::string& text(const std::string& key) const { return values_.at(key); }

 private:
  Params values_;
};

/// Result of one statistic in one replication.
struct Outcome {
  double statistic = kNotApplicable;
  bool reject = true;
  bool failed = true;
  std::int64_t clamps = 0;
};

Outcome outcome_of(const TestReport& r) {
  return {r.statistic, r.reject, false, r.clamp_events};
}

/// A family of cells that share one sampled network per replication.
struct Job {
  std::vector<std::size_t> cells;
  std::function<void(Rng&, std::vector<Outcome>&)> run;
};

struct Plan {
  std::vector<ResultRow> cells;
  std::vector<Job> jobs;
};

ResultRow make_cell(const ExperimentSpec& spec, int k, int k0, Index n, double r, double z,
                    StatisticVariant variant) {
  ResultRow row;
  row.experiment_id = spec.id;
  row.k = k;
  row.k0 = k0;
  row.n = n;
  row.r = r;
  row.z = z;
  row.variant = variant;
  row.seed = spec.base_seed;
  row.replications = spec.replications;
  return row;
}

ClusteringConfig clustering_for(Rng& rng) {
  ClusteringConfig cfg;
  cfg.seed = rng();
  return cfg;
}

// Clustering or estimation that cannot produce a statistic (a fitted
// community of size one, an isolated node) yields a failed outcome.
template <typename Fn>
void guarded(std::vector<Outcome>& out, std::size_t first, std::size_t count, Fn&& fn) {
  try {
    fn();
  } catch (const DomainError&) {
    for (std::size_t c = first; c < first + count; ++c) out[c] = Outcome{};
  } catch (const NumericError&) {
    for (std::size_t c = first; c < first + count; ++c) out[c] = Outcome{};
  }
}

Membership planted_membership(Index n, int k, Rng& rng, bool multinomial) {
  if (!multinomial) {
    // Equal blocks in node order.
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i * k / n);
    return Membership(labels, k);
  }
  std::vector<double> pi(static_cast<std::size_t>(k), 1.0 / k);
  return sample_membership_multinomial(n, pi, rng);
}

Plan plan_sbm_count(const ExperimentSpec& spec, const Parameters& p, bool membership_test) {
  Plan plan;
  const int block = p.integer("block_size", 2);
  const auto ks = p.ints("k", 1);
  const auto k0s = membership_test ? ks : p.ints("k0", 1);
  const double scale = p.real("scale"), boost = p.real("boost");
  for (int k : ks) {
    const Index n = static_cast<Index>(block) * k;
    Job job;
    std::vector<int> targets = membership_test ? std::vector<int>{k} : k0s;
    for (int k0 : targets) {
      job.cells.push_back(plan.cells.size());
      plan.cells.push_back(make_cell(spec, k, k0, n, kNotApplicable, kNotApplicable, StatisticVariant::Tn));
    }
    const BlockMatrix b = BlockMatrix::planted(k, scale, boost);
    job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
      const Membership sigma = planted_membership(n, k, rng, false);
      const Graph g = sample_sbm(sigma, b, rng);
      const auto cfg = clustering_for(rng);
      for (std::size_t c = 0; c < targets.size(); ++c)
        guarded(out, c, 1, [&] {
          auto cc = cfg;
          cc.seed = mix_seed(cfg.seed + static_cast<std::uint64_t>(targets[c]));
          out[c] = outcome_of(test_num_communities(g, targets[c], alpha, ModelKind::Sbm, cc));
        });
    };
    plan.jobs.push_back(std::move(job));
  }
  return plan;
}

Plan plan_sim1(const ExperimentSpec& spec, const Parameters& p) {
  Plan plan;
  const auto n = static_cast<Index>(p.integer("n", 4));
  const int k = p.integer("k", 1);
  const BlockMatrix b = BlockMatrix::planted(k, p.real("scale"), p.real("boost"));
  plan.cells.push_back(make_cell(spec, k, k, n, kNotApplicable, kNotApplicable, StatisticVariant::Tn));
  Job job;
  job.cells = {0};
  job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
    const Membership sigma = planted_membership(n, k, rng, true);
    const Graph g = sample_sbm(sigma, b, rng);
    const auto cfg = clustering_for(rng);
    guarded(out, 0, 1, [&] { out[0] = outcome_of(test_num_communities(g, k, alpha, ModelKind::Sbm, cfg)); });
  };
  plan.jobs.push_back(std::move(job));
  return plan;
}

Plan plan_r_sweep(const ExperimentSpec& spec, const Parameters& p) {
  Plan plan;
  const int block = p.integer("block_size", 2);
  const int k = p.integer("k", 1);
  const double boost = p.real("boost");
  const Index n = static_cast<Index>(block) * k;
  for (double r : p.reals("r")) {
    if (!(r > 0 && r * (1 + boost) < 1)) throw ConfigError("r must keep every block probability in (0, 1)");
    Job job;
    job.cells = {plan.cells.size()};
    plan.cells.push_back(make_cell(spec, k, k, n, r, kNotApplicable, StatisticVariant::Tn));
    const BlockMatrix b = BlockMatrix::planted(k, r, boost);
    job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
      const Graph g = sample_sbm(planted_membership(n, k, rng, false), b, rng);
      const auto cfg = clustering_for(rng);
      guarded(out, 0, 1, [&] { out[0] = outcome_of(test_num_communities(g, k, alpha, ModelKind::Sbm, cfg)); });
    };
    plan.jobs.push_back(std::move(job));
  }
  return plan;
}

Plan plan_sim3_power(const ExperimentSpec& spec, const Parameters& p) {
  Plan plan;
  const int k = p.integer("k", 2);
  const double boost = p.real("boost");
  const auto zs = p.reals("z");
  for (double z : zs)
    if (!(z > 0 && z < 1)) throw ConfigError("z must lie in (0, 1)");
  for (int block : p.ints("block_size", 2))
    for (double r : p.reals("r")) {
      if (!(r > 0 && r * (1 + boost) < 1)) throw ConfigError("r must keep every block probability in (0, 1)");
      const Index n = static_cast<Index>(block) * k;
      Job job;
      for (double z : zs) {
        job.cells.push_back(plan.cells.size());
        plan.cells.push_back(make_cell(spec, k, k, n, r, z, StatisticVariant::Tn));
      }
      const BlockMatrix b = BlockMatrix::planted(k, r, boost);
      job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
        const Membership sigma = planted_membership(n, k, rng, false);
        const Graph g = sample_sbm(sigma, b, rng);
        for (std::size_t c = 0; c < zs.size(); ++c) {
          const Membership sigma_z = corrupt_labels(sigma, zs[c], rng);
          guarded(out, c, 1, [&] { out[c] = outcome_of(test_membership(g, sigma_z, alpha, ModelKind::Sbm)); });
        }
      };
      plan.jobs.push_back(std::move(job));
    }
  return plan;
}

// Tn2 and Tn3 share one maximum deviation; both cells are filled from it.
void fill_tn2_tn3(const TestReport& tn3, double alpha, std::vector<Outcome>& out, std::size_t at) {
  const TestReport tn2 = decide(tn3.tn2_diagnostic, tn3.L, StatisticVariant::Tn2, tn3.k0, tn3.n, alpha,
                                tn3.clamp_events);
  out[at] = outcome_of(tn2);
  out[at + 1] = outcome_of(tn3);
}

Plan plan_sim4(const ExperimentSpec& spec, const Parameters& p) {
  Plan plan;
  const auto n = static_cast<Index>(p.integer("n", 4));
  const int k = p.integer("k", 1);
  const BlockMatrix b = BlockMatrix::planted(k, p.real("scale"), p.real("boost"));
  Job job;
  for (auto v : {StatisticVariant::Tn1, StatisticVariant::Tn2, StatisticVariant::Tn3}) {
    job.cells.push_back(plan.cells.size());
    plan.cells.push_back(make_cell(spec, k, k, n, kNotApplicable, kNotApplicable, v));
  }
  job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
    const Membership sigma = planted_membership(n, k, rng, true);
    const DegreeParams omega = sample_degree_params_sim4(n, rng);
    const Graph g = sample_dcsbm(sigma, b, omega, rng);
    const auto cfg = clustering_for(rng);
    guarded(out, 0, 3, [&] {
      const Membership fitted = score(g, k, cfg);
      if (fitted.smallest_community() < 2) throw DomainError("singleton community");
      out[0] = outcome_of(evaluate_membership(g, fitted, alpha, StatisticVariant::Tn1, &omega));
      fill_tn2_tn3(evaluate_membership(g, fitted, alpha, StatisticVariant::Tn3), alpha, out, 1);
    });
  };
  plan.jobs.push_back(std::move(job));
  return plan;
}

Plan plan_dcsbm_grid(const ExperimentSpec& spec, const Parameters& p, bool membership_test) {
  Plan plan;
  const int block = p.integer("block_size", 2);
  const auto ks = p.ints("k", 1);
  const auto k0s = membership_test ? ks : p.ints("k0", 1);
  const double scale = p.real("scale"), boost = p.real("boost");
  for (int k : ks) {
    const Index n = static_cast<Index>(block) * k;
    std::vector<int> targets = membership_test ? std::vector<int>{k} : k0s;
    Job job;
    for (int k0 : targets)
      for (auto v : {StatisticVariant::Tn2, StatisticVariant::Tn3}) {
        job.cells.push_back(plan.cells.size());
        plan.cells.push_back(make_cell(spec, k, k0, n, kNotApplicable, kNotApplicable, v));
      }
    const BlockMatrix b = BlockMatrix::planted(k, scale, boost);
    job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
      const Membership sigma = planted_membership(n, k, rng, false);
      const DegreeParams omega = sample_degree_params_sim4(n, rng);
      const Graph g = sample_dcsbm(sigma, b, omega, rng);
      const auto cfg = clustering_for(rng);
      for (std::size_t c = 0; c < targets.size(); ++c)
        guarded(out, 2 * c, 2, [&] {
          auto cc = cfg;
          cc.seed = mix_seed(cfg.seed + static_cast<std::uint64_t>(targets[c]));
          fill_tn2_tn3(test_num_communities(g, targets[c], alpha, ModelKind::Dcsbm, cc), alpha, out, 2 * c);
        });
    };
    plan.jobs.push_back(std::move(job));
  }
  return plan;
}

Plan plan_er_power(const ExperimentSpec& spec, const Parameters& p) {
  Plan plan;
  const double scale = p.real("scale");
  for (int block : p.ints("block_size", 2))
    for (double r : p.reals("r")) {
      if (!(scale > 0 && scale * (1 + r) < 1)) throw ConfigError("scale (1 + r) must lie in (0, 1)");
      const Index n = 2 * static_cast<Index>(block);
      Job job;
      job.cells = {plan.cells.size()};
      plan.cells.push_back(make_cell(spec, 2, 1, n, r, kNotApplicable, StatisticVariant::Tn));
      const BlockMatrix b = BlockMatrix::planted(2, scale, r);
      job.run = [=, alpha = spec.alpha](Rng& rng, std::vector<Outcome>& out) {
        const Graph g = sample_sbm(planted_membership(n, 2, rng, false), b, rng);
        guarded(out, 0, 1, [&] {
          out[0] = outcome_of(test_membership(g, Membership::single_community(n), alpha, ModelKind::Sbm));
        });
      };
      plan.jobs.push_back(std::move(job));
    }
  return plan;
}

std::string resolve_path(const Parameters& p, const std::string& key, const char* env,
                         const std::string& what) {
  std::string path = p.text(key);
  if (path.empty())
    if (const char* e = std::getenv(env)) path = e;
  if (path.empty())
    throw IoError(what + " not supplied: pass --set " + key + "=PATH or set " + env +
                  " (see README, section 'Real data')");
  if (!std::ifstream(path)) throw IoError("cannot open " + what + " '" + path + "'");
  return path;
}

ResultRow data_row(const ExperimentSpec& spec, const TestReport& r) {
  ResultRow row = make_cell(spec, 0, r.k0, r.n, kNotApplicable, kNotApplicable, r.variant);
  row.replications = 1;
  row.rejection_rate = r.reject ? 1.0 : 0.0;
  row.clamp_total = r.clamp_events;
  row.statistics = {r.statistic};
  return row;
}

void run_data_trade(const ExperimentSpec& spec, const Parameters& p, ExperimentResult& result) {
  const std::string path = resolve_path(p, "file", "BLOCKGOF_TRADE_FILE", "trade weight file");
  const double pct = p.real("percentile");
  if (!(pct > 0 && pct < 1)) throw ConfigError("percentile must lie in (0, 1)");
  const Graph g = symmetrize_and_threshold(load_weighted_digraph_file(path).digraph, pct);
  for (int k0 : p.ints("k0", 1)) {
    ClusteringConfig cfg;
    cfg.seed = spec.base_seed;
    const auto report = test_num_communities(g, k0, spec.alpha, ModelKind::Sbm, cfg);
    result.reports.push_back({"sbm k0=" + std::to_string(k0), report});
    result.rows.push_back(data_row(spec, report));
  }
}

Membership read_raw_labels(const std::string& path, Index n) {
  std::ifstream in(path);
  std::vector<long long> raw;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long v;
    if (!(ls >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("expected an integer label", line_no);
    }
    raw.push_back(v);
  }
  if (static_cast<Index>(raw.size()) != n)
    throw DomainError("label file has " + std::to_string(raw.size()) + " entries for " +
                      std::to_string(n) + " nodes");
  std::set<long long> distinct(raw.begin(), raw.end());
  std::vector<long long> values(distinct.begin(), distinct.end());
  std::vector<int> labels;
  labels.reserve(raw.size());
  for (long long v : raw)
    labels.push_back(static_cast<int>(std::lower_bound(values.begin(), values.end(), v) - values.begin()));
  return Membership(labels, static_cast<int>(values.size()));
}

void run_data_polblogs(const ExperimentSpec& spec, const Parameters& p, ExperimentResult& result) {
  const std::string edges = resolve_path(p, "edges", "BLOCKGOF_POLBLOGS_EDGES", "political blog edge list");
  const Graph full = load_edge_list_file(edges).graph;
  const auto lcc = largest_connected_component(full);
  const Graph& g = lcc.graph;

  ClusteringConfig cfg;
  cfg.seed = spec.base_seed;
  const auto sbm = test_num_communities(g, p.integer("sbm_k0", 1), spec.alpha, ModelKind::Sbm, cfg);
  result.reports.push_back({"sbm k0=" + std::to_string(sbm.k0), sbm});
  result.rows.push_back(data_row(spec, sbm));
  const auto dc = test_num_communities(g, p.integer("dcsbm_k0", 1), spec.alpha, ModelKind::Dcsbm, cfg);
  result.reports.push_back({"dcsbm k0=" + std::to_string(dc.k0), dc});
  result.rows.push_back(data_row(spec, dc));

  std::string labels_path = p.text("labels");
  if (labels_path.empty())
    if (const char* e = std::getenv("BLOCKGOF_POLBLOGS_LABELS")) labels_path = e;
  if (labels_path.empty()) return;
  const Membership all = read_raw_labels(resolve_path(p, "labels", "BLOCKGOF_POLBLOGS_LABELS", "stance labels"),
                                         full.size());
  std::vector<int> kept;
  kept.reserve(lcc.new_to_old.size());
  for (Index old : lcc.new_to_old) kept.push_back(all[old]);
  const Membership stance = Membership(kept, all.communities()).canonical();
  const auto st = test_membership(g, stance, spec.alpha, ModelKind::Dcsbm);
  result.reports.push_back({"dcsbm stance membership", st});
  result.rows.push_back(data_row(spec, st));
}

Plan make_plan(const ExperimentSpec& spec, const Parameters& p) {
  const auto& id = spec.id;
  if (id == "sim1") return plan_sim1(spec, p);
  if (id == "sim2-grid") return plan_sbm_count(spec, p, false);
  if (id == "sim2-r-sweep") return plan_r_sweep(spec, p);
  if (id == "sim3-type1") return plan_sbm_count(spec, p, true);
  if (id == "sim3-power") return plan_sim3_power(spec, p);
  if (id == "sim4") return plan_sim4(spec, p);
  if (id == "sim5") return plan_dcsbm_grid(spec, p, false);
  if (id == "sim6") return plan_dcsbm_grid(spec, p, true);
  if (id == "supp-er-power") return plan_er_power(spec, p);
  throw ConfigError("unknown experiment '" + id + "'; valid ids: " + join_ids());
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "sim1", "sim2-grid", "sim2-r-sweep", "sim3-type1", "sim3-power", "sim4",
      "sim5", "sim6", "supp-er-power", "data-trade", "data-polblogs"};
  return ids;
}

std::map<std::string, std::string> experiment_parameters(const std::string& id) {
  const auto& table = parameter_table();
  auto it = table.find(id);
  if (it == table.end()) throw ConfigError("unknown experiment '" + id + "'; valid ids: " + join_ids());
  return it->second;
}

void ExperimentSpec::validate() const {
  const auto declared = experiment_parameters(id);
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie in (0, 1)");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  for (const auto& [key, value] : overrides)
    if (!declared.count(key)) {
      std::string names;
      for (const auto& [name, _] : declared) names += (names.empty() ? "" : ", ") + name;
      throw ConfigError("experiment '" + id + "' has no parameter '" + key + "' (accepted: " + names + ")");
    }
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const Parameters params(spec);
  ExperimentResult result;
  result.id = spec.id;

  if (spec.id == "data-trade" || spec.id == "data-polblogs") {
    if (spec.id == "data-trade")
      run_data_trade(spec, params, result);
    else
      run_data_polblogs(spec, params, result);
  } else {
    Plan plan = make_plan(spec, params);
    const auto reps = static_cast<std::size_t>(spec.replications);
    const std::size_t tasks = plan.jobs.size() * reps;
    std::vector<std::vector<Outcome>> outcomes(tasks);
    const int threads = spec.threads > 0 ? spec.threads : default_thread_count();
    parallel_for(tasks, threads, [&](std::size_t t) {
      const std::size_t job = t / reps, rep = t % reps;
      // Replication r of every job starts from base_seed + r; the job index
      // decorrelates jobs while keeping each cell reproducible on its own.
      Rng rng(mix_seed(mix_seed(spec.base_seed + rep) ^ (0x9e3779b97f4a7c15ULL * (job + 1))));
      std::vector<Outcome> out(plan.jobs[job].cells.size());
      plan.jobs[job].run(rng, out);
      outcomes[t] = std::move(out);
    });

    for (std::size_t j = 0; j < plan.jobs.size(); ++j)
      for (std::size_t c = 0; c < plan.jobs[j].cells.size(); ++c) {
        ResultRow& row = plan.cells[plan.jobs[j].cells[c]];
        std::size_t rejects = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const Outcome& o = outcomes[j * reps + rep][c];
          rejects += o.reject ? 1 : 0;
          row.clamp_total += o.clamps;
          if (o.failed)
            ++row.failures;
          else
            row.statistics.push_back(o.statistic);
        }
        const double rate = static_cast<double>(rejects) / static_cast<double>(reps);
        row.rejection_rate = rate;
        row.stderr_ = std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
        if (row.statistics.size() >= 2) row.ks_stat = ks_distance_to_gumbel(row.statistics);
      }
    result.rows = std::move(plan.cells);
  }
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double ks_distance_to_gumbel(std::span<const double> sample) {
  if (sample.size() < 2) throw DomainError("KS distance needs at least two observations");
  return ks_distance(sample, [](double y) { return gumbel_cdf(y); });
}

Index corrupted_count(Index n, double z) {
  if (!(z > 0 && z < 1)) throw DomainError("corruption fraction must lie in (0, 1)");
  // Guard against z n landing a hair above an integer through rounding.
  const double raw = z * static_cast<double>(n);
  const double snapped = std::nearbyint(raw);
  return static_cast<Index>(std::abs(raw - snapped) < 1e-9 ? snapped : std::ceil(raw));
}

Membership corrupt_labels(const Membership& sigma, double z, Rng& rng) {
  const int k = sigma.communities();
  if (k < 2) throw DomainError("corrupting labels needs at least two communities");
  const Index n = sigma.size();
  const Index m = corrupted_count(n, z);
  if (m > n) throw DomainError("more corrupted nodes than nodes");
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::iota(order.begin(), order.end(), Index{0});
    std::vector<int> labels = sigma.labels();
    for (Index t = 0; t < m; ++t) {
      const auto pick = t + static_cast<Index>(uniform01(rng) * static_cast<double>(n - t));
      std::swap(order[t], order[std::min(pick, n - 1)]);
      const Index node = order[t];
      int other = static_cast<int>(uniform01(rng) * (k - 1));
      other = std::min(other, k - 2);
      labels[node] = other >= sigma[node] ? other + 1 : other;
    }
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++counts[l];
    if (std::all_of(counts.begin(), counts.end(), [](Index c) { return c > 0; }))
      return Membership(labels, k);
  }
  throw DomainError("could not corrupt labels without emptying a community");
}

}  // namespace blockgof

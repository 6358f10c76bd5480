#include "blockgof/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "blockgof/community.hpp"
#include "blockgof/errors.hpp"
#include "blockgof/gof_test.hpp"
#include "blockgof/harness.hpp"
#include "blockgof/power.hpp"
#include "blockgof/report_io.hpp"

namespace blockgof {

BlockMatrix parse_block_spec(const std::string& spec, int k) {
  if (k < 1) throw ConfigError("community count must be positive");
  static const std::regex planted(
      R"(^\s*([-+0-9.eE]+)\s*\(\s*1\s*\+\s*([-+0-9.eE]+)\s*\*\s*diag\s*\)\s*$)");
  static const std::regex constant(R"(^\s*([-+0-9.eE]+)\s*$)");
  std::smatch m;
  try {
    if (std::regex_match(spec, m, planted)) return BlockMatrix::planted(k, std::stod(m[1]), std::stod(m[2]));
    if (std::regex_match(spec, m, constant)) return BlockMatrix::constant(k, std::stod(m[1]));
  } catch (const std::logic_error& e) {
    throw ConfigError("invalid block matrix spec '" + spec + "': " + e.what());
  }
  if (std::filesystem::is_regular_file(spec)) {
    BlockMatrix b = read_block_matrix_csv_file(spec);
    if (b.communities() != k)
      throw ConfigError("block matrix file '" + spec + "' is " + std::to_string(b.communities()) +
                        " x " + std::to_string(b.communities()) + " but k = " + std::to_string(k));
    return b;
  }
  throw ConfigError("invalid block matrix spec '" + spec +
                    "': expected 'a(1+b*diag)', a constant, or a CSV file path");
}

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  double alpha = 0.05;
};

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

OutputFormat table_format(const Globals& g) {
  return g.format.empty() ? OutputFormat::Csv : parse_output_format(g.format);
}

// ---- generate

struct GenerateArgs {
  std::string model = "sbm";
  Index n = 0;
  int k = 0;
  std::string b_spec;
  std::string omega = "sim4-mixture";
  std::string membership = "balanced";
};

void cmd_generate(const GenerateArgs& a, const Globals& g, std::ostream& out) {
  const ModelKind model = parse_model_kind(a.model);
  if (g.out.empty()) throw ConfigError("generate needs --out DIR");
  if (a.k > a.n) throw ConfigError("--k cannot exceed --n");
  const BlockMatrix b = parse_block_spec(a.b_spec, a.k);
  Rng rng(g.seed);
  Membership sigma;
  if (a.membership == "balanced") {
    sigma = sample_membership_balanced(a.n, a.k, rng);
  } else if (a.membership == "multinomial") {
    std::vector<double> pi(static_cast<std::size_t>(a.k), 1.0 / a.k);
    sigma = sample_membership_multinomial(a.n, pi, rng);
  } else {
    throw ConfigError("--membership must be 'balanced' or 'multinomial'");
  }
  const std::filesystem::path dir(g.out);
  std::filesystem::create_directories(dir);
  Graph graph;
  if (model == ModelKind::Sbm) {
    graph = sample_sbm(sigma, b, rng);
  } else {
    DegreeParams omega;
    if (a.omega == "sim4-mixture")
      omega = sample_degree_params_sim4(a.n, rng);
    else if (a.omega == "ones")
      omega = DegreeParams::ones(a.n);
    else
      omega = read_degree_params_file(a.omega);
    if (omega.size() != a.n) throw ConfigError("degree parameter file length differs from --n");
    graph = sample_dcsbm(sigma, b, omega, rng);
    auto f = open_output(dir / "omega.txt");
    write_degree_params(f, omega);
  }
  {
    auto f = open_output(dir / "graph.edges");
    write_edge_list(f, graph);
  }
  {
    auto f = open_output(dir / "membership.txt");
    write_membership(f, sigma);
  }
  {
    auto f = open_output(dir / "B.csv");
    write_block_matrix_csv(f, b);
  }
  out << "wrote " << (dir / "graph.edges").string() << " (n=" << graph.size()
      << ", edges=" << graph.edge_count() << ")\n";
}

// ---- detect

struct DetectArgs {
  std::string graph;
  int k = 0;
  std::string method = "spectral";
  int restarts = 20;
};

void cmd_detect(const DetectArgs& a, const Globals& g, std::ostream& out) {
  if (a.method != "spectral" && a.method != "score")
    throw ConfigError("--method must be 'spectral' or 'score'");
  const Graph graph = load_edge_list_file(a.graph).graph;
  ClusteringConfig cfg;
  cfg.seed = g.seed;
  cfg.restarts = a.restarts;
  const Membership sigma = a.method == "spectral" ? spectral_clustering(graph, a.k, cfg) : score(graph, a.k, cfg);
  if (g.out.empty()) {
    write_membership(out, sigma);
  } else {
    auto f = open_output(g.out);
    write_membership(f, sigma);
  }
}

// ---- test

struct TestArgs {
  std::string graph;
  std::string mode = "k";
  int k0 = 0;
  std::string sigma0;
  std::string model = "sbm";
};

void cmd_test(const TestArgs& a, const Globals& g, std::ostream& out) {
  if (a.mode != "k" && a.mode != "membership") throw ConfigError("--mode must be 'k' or 'membership'");
  if (a.mode == "k" && a.k0 < 1) throw ConfigError("--mode k requires --k0");
  if (a.mode == "membership" && a.sigma0.empty()) throw ConfigError("--mode membership requires --sigma0");
  if (a.mode == "k" && !a.sigma0.empty()) throw ConfigError("--sigma0 only applies to --mode membership");
  if (a.mode == "membership" && a.k0 > 0) throw ConfigError("--k0 only applies to --mode k");
  if (!(g.alpha > 0 && g.alpha < 1)) throw ConfigError("--alpha must lie in (0, 1)");
  const ModelKind model = parse_model_kind(a.model);
  const std::string format = g.format.empty() ? "text" : g.format;
  if (format != "text") parse_output_format(format);

  const Graph graph = load_edge_list_file(a.graph).graph;
  TestReport report;
  if (a.mode == "k") {
    ClusteringConfig cfg;
    cfg.seed = g.seed;
    report = test_num_communities(graph, a.k0, g.alpha, model, cfg);
  } else {
    const Membership sigma0 = read_membership_file(a.sigma0);
    report = test_membership(graph, sigma0, g.alpha, model);
  }
  if (format == "text") {
    write_report_text(out, report);
  } else if (format == "csv") {
    write_report_csv_header(out);
    write_report_csv_row(out, report);
  } else {
    write_report_json(out, report);
  }
}

// ---- assess

struct AssessArgs {
  std::string sigma;
  std::string b_spec;
  std::string sigma0;
  double gamma = 1.1;
};

void cmd_assess(const AssessArgs& a, const Globals& g, std::ostream& out) {
  if (!(a.gamma > 1)) throw ConfigError("--gamma must exceed 1");
  const Membership sigma = read_membership_file(a.sigma);
  const BlockMatrix b = parse_block_spec(a.b_spec, sigma.communities());
  const Membership sigma0 =
      a.sigma0.empty() ? Membership::single_community(sigma.size()) : read_membership_file(a.sigma0);
  const auto assessment = assess_alternative(sigma, b, sigma0, a.gamma);
  // The large-n closed form applies to a balanced two-block truth against
  // the one-community fit.
  double asymptotic = kNotApplicable;
  if (sigma.communities() == 2 && sigma0.communities() == 1 &&
      sigma.community_size(0) == sigma.community_size(1) && b(0, 0) == b(1, 1))
    asymptotic = er_separation_asymptotic(sigma.size(), b(0, 0), b(0, 1));
  write_assessment(out, assessment, asymptotic, table_format(g));
}

// ---- simulate

struct SimulateArgs {
  std::string experiment;
  int replications = 200;
  std::vector<std::string> sets;
  int threads = 0;
};

void cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  ExperimentSpec spec;
  spec.id = a.experiment;
  spec.replications = a.replications;
  spec.base_seed = g.seed;
  spec.alpha = g.alpha;
  spec.threads = a.threads;
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects NAME=VALUE, got '" + s + "'");
    spec.overrides[s.substr(0, eq)] = s.substr(eq + 1);
  }
  spec.validate();
  const OutputFormat format = table_format(g);
  const std::string ext = format == OutputFormat::Csv ? ".csv" : ".jsonl";
  const ExperimentResult result = run_experiment(spec);

  if (g.out.empty()) {
    write_experiment(out, result, format);
    return;
  }
  const std::filesystem::path dir(g.out);
  std::filesystem::create_directories(dir);
  {
    auto f = open_output(dir / (spec.id + ext));
    write_experiment(f, result, format);
  }
  {
    auto f = open_output(dir / (spec.id + "_samples" + ext));
    write_experiment_samples(f, result, format);
  }
  if (!result.reports.empty()) {
    auto f = open_output(dir / (spec.id + "_reports" + ext));
    if (format == OutputFormat::Csv) write_report_csv_header(f, true);
    for (const auto& lr : result.reports) {
      if (format == OutputFormat::Csv)
        write_report_csv_row(f, lr.report, &lr.label);
      else
        write_report_json(f, lr.report, &lr.label);
    }
  }
  out << "wrote " << (dir / (spec.id + ext)).string() << " (" << result.rows.size() << " rows, "
      << result.runtime_seconds << " s)\n";
}

// ---- ingest

struct IngestArgs {
  std::string edges;
  std::string weighted;
  double percentile = -1;
  bool lcc = false;
  std::string mapping;
};

void cmd_ingest(const IngestArgs& a, const Globals& g, std::ostream& out) {
  if (a.edges.empty() == a.weighted.empty()) throw ConfigError("ingest needs exactly one of --edges or --weighted");
  if (!a.weighted.empty() && !(a.percentile > 0 && a.percentile < 1))
    throw ConfigError("--weighted requires --percentile in (0, 1)");
  if (a.edges.size() && a.percentile != -1) throw ConfigError("--percentile only applies to --weighted");
  if (!a.mapping.empty() && !a.lcc) throw ConfigError("--mapping requires --lcc");
  if (g.out.empty()) throw ConfigError("ingest needs --out FILE");

  Graph graph = a.weighted.empty()
                    ? load_edge_list_file(a.edges).graph
                    : symmetrize_and_threshold(load_weighted_digraph_file(a.weighted).digraph, a.percentile);
  if (a.lcc) {
    auto comp = largest_connected_component(graph);
    if (!a.mapping.empty()) {
      auto f = open_output(a.mapping);
      for (Index old : comp.new_to_old) f << old << '\n';
    }
    graph = std::move(comp.graph);
  }
  auto f = open_output(g.out);
  write_edge_list(f, graph);
  out << "wrote " << g.out << " (n=" << graph.size() << ", edges=" << graph.edge_count() << ")\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goodness-of-fit tests for stochastic block models", "blockgof"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output file or directory");
  app.add_option("--format", g.format, "csv | json-lines (test also accepts text, its default)");
  app.add_option("--alpha", g.alpha, "test level")->capture_default_str();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample a network from an SBM or DCSBM");
  generate->add_option("--model", gen.model, "sbm | dcsbm")->capture_default_str();
  generate->add_option("--n", gen.n, "node count")->required()->check(CLI::PositiveNumber);
  generate->add_option("--k", gen.k, "community count")->required()->check(CLI::PositiveNumber);
  generate->add_option("--B", gen.b_spec, "'a(1+b*diag)', a constant, or a CSV path")->required();
  generate->add_option("--omega", gen.omega, "sim4-mixture | ones | file (dcsbm only)")->capture_default_str();
  generate->add_option("--membership", gen.membership, "balanced | multinomial")->capture_default_str();

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "estimate communities");
  detect->add_option("--graph", det.graph, "edge list")->required();
  detect->add_option("--k", det.k, "community count")->required()->check(CLI::PositiveNumber);
  detect->add_option("--method", det.method, "spectral | score")->capture_default_str();
  detect->add_option("--restarts", det.restarts, "k-means restarts")->capture_default_str()->check(CLI::PositiveNumber);

  TestArgs tst;
  auto* test = app.add_subcommand("test", "goodness-of-fit test for k0 or a membership vector");
  test->add_option("--graph", tst.graph, "edge list")->required();
  test->add_option("--mode", tst.mode, "k | membership")->capture_default_str();
  test->add_option("--k0", tst.k0, "hypothesised community count")->check(CLI::PositiveNumber);
  test->add_option("--sigma0", tst.sigma0, "hypothesised membership file");
  test->add_option("--model", tst.model, "sbm | dcsbm")->capture_default_str();

  AssessArgs ass;
  auto* assess = app.add_subcommand("assess", "check whether an alternative lies in the power class");
  assess->add_option("--sigma", ass.sigma, "true membership file")->required();
  assess->add_option("--B", ass.b_spec, "true block matrix spec")->required();
  assess->add_option("--sigma0", ass.sigma0, "hypothesised membership file (default: one community)");
  assess->add_option("--gamma", ass.gamma, "gamma > 1")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment");
  simulate->add_option("--experiment", sim.experiment, "experiment id")->required();
  simulate->add_option("--replications", sim.replications, "replications per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--set", sim.sets, "parameter override NAME=VALUE (repeatable)");
  simulate->add_option("--threads", sim.threads, "worker threads (default: BLOCKMODEL_GOF_THREADS or all cores)");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "convert raw network data to a canonical edge list");
  ingest->add_option("--edges", ing.edges, "edge list input");
  ingest->add_option("--weighted", ing.weighted, "directed weighted triplets 'i j w'");
  ingest->add_option("--percentile", ing.percentile, "threshold percentile for --weighted");
  ingest->add_flag("--lcc", ing.lcc, "keep the largest connected component");
  ingest->add_option("--mapping", ing.mapping, "write new -> old node ids (with --lcc)");

  // Global options may appear after the subcommand name.
  for (auto* sub : {generate, detect, test, assess, simulate, ingest}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*generate) cmd_generate(gen, g, out);
    if (*detect) cmd_detect(det, g, out);
    if (*test) cmd_test(tst, g, out);
    if (*assess) cmd_assess(ass, g, out);
    if (*simulate) cmd_simulate(sim, g, out);
    if (*ingest) cmd_ingest(ing, g, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace blockgof

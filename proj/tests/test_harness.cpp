#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blockgof/gumbel.hpp"
#include "blockgof/harness.hpp"
#include "blockgof/report_io.hpp"

using namespace blockgof;

namespace {

ExperimentSpec small_sim1(int threads) {
  ExperimentSpec spec;
  spec.id = "sim1";
  spec.replications = 6;
  spec.base_seed = 77;
  spec.threads = threads;
  spec.overrides["n"] = "150";
  return spec;
}

}  // namespace

TEST_CASE("experiment ids and parameter tables") {
  const std::set<std::string> ids(experiment_ids().begin(), experiment_ids().end());
  for (const char* id : {"sim1", "sim2-grid", "sim2-r-sweep", "sim3-type1", "sim3-power", "sim4", "sim5",
                         "sim6", "supp-er-power", "data-trade", "data-polblogs"})
    CHECK(ids.count(id) == 1);
  CHECK(experiment_parameters("sim1").at("n") == "500");
  CHECK_THROWS_AS(experiment_parameters("sim9"), ConfigError);
}

TEST_CASE("spec validation") {
  ExperimentSpec spec;
  spec.id = "sim1";
  CHECK_NOTHROW(spec.validate());
  spec.replications = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.replications = 10;
  spec.overrides["bogus"] = "1";
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.overrides.clear();
  spec.id = "nope";
  try {
    spec.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("sim2-grid") != std::string::npos);
  }
  ExperimentSpec bad = small_sim1(1);
  bad.overrides["n"] = "abc";
  CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("results do not depend on the worker count") {
  auto a = run_experiment(small_sim1(1));
  auto b = run_experiment(small_sim1(3));
  REQUIRE(a.rows.size() == 1);
  REQUIRE(b.rows.size() == 1);
  CHECK(a.rows[0].statistics == b.rows[0].statistics);
  CHECK(a.rows[0].rejection_rate == b.rows[0].rejection_rate);
  CHECK(a.rows[0].replications == 6);
  CHECK(a.rows[0].statistics.size() + static_cast<std::size_t>(a.rows[0].failures) == 6);

  auto c = small_sim1(1);
  c.base_seed = 78;
  CHECK(run_experiment(c).rows[0].statistics != a.rows[0].statistics);
}

TEST_CASE("grid experiments produce one row per cell") {
  ExperimentSpec spec;
  spec.id = "sim2-grid";
  spec.replications = 3;
  spec.overrides = {{"block_size", "40"}, {"k", "2,3"}, {"k0", "1,2,3"}};
  auto res = run_experiment(spec);
  CHECK(res.rows.size() == 6);
  for (const auto& row : res.rows) {
    CHECK(row.n == 40 * row.k);
    CHECK(row.variant == StatisticVariant::Tn);
  }
}

TEST_CASE("missing real data is an I/O error that points at the README") {
  ExperimentSpec spec;
  spec.id = "data-trade";
  spec.replications = 1;
  spec.overrides["file"] = "/nonexistent/trade.txt";
  CHECK_THROWS_AS(run_experiment(spec), IoError);
}

TEST_CASE("KS distance to the Gumbel null") {
  std::vector<double> s(10, 0.7);
  const double f = gumbel_cdf(0.7);
  CHECK(ks_distance_to_gumbel(s) == doctest::Approx(std::max(f, 1 - f)));
}

TEST_CASE("label corruption") {
  Rng rng(12);
  Membership s({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);
  CHECK(corrupted_count(10, 0.01) == 1);
  CHECK(corrupted_count(400, 0.1) == 40);
  for (int t = 0; t < 50; ++t) {
    auto c = corrupt_labels(s, 0.01, rng);
    int changed = 0;
    for (Index i = 0; i < 10; ++i) changed += c[i] != s[i];
    CHECK(changed == 1);
    CHECK(c.communities() == 2);
  }
  auto c = corrupt_labels(s, 0.3, rng);
  int changed = 0;
  for (Index i = 0; i < 10; ++i) changed += c[i] != s[i];
  CHECK(changed == 3);
  CHECK_THROWS_AS(corrupt_labels(Membership::single_community(5), 0.2, rng), DomainError);
}

TEST_CASE("experiment CSV has the fixed header") {
  ExperimentResult res;
  res.id = "sim1";
  ResultRow row;
  row.experiment_id = "sim1";
  row.k = row.k0 = 3;
  row.n = 500;
  row.rejection_rate = 0.045;
  row.stderr_ = 0.01;
  row.ks_stat = 0.1;
  row.seed = 20190101;
  res.rows.push_back(row);
  std::ostringstream out;
  write_experiment(out, res, OutputFormat::Csv);
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == kExperimentCsvHeader);
  CHECK(first.rfind("sim1,3,3,500,", 0) == 0);
  CHECK(first.find("T_n") != std::string::npos);

  std::ostringstream js;
  write_experiment(js, res, OutputFormat::JsonLines);
  auto j = nlohmann::json::parse(js.str());
  CHECK(j["experiment_id"] == "sim1");
  CHECK(j["rejection_rate"] == 0.045);
  CHECK(j["r"].is_null());
}

TEST_CASE("test reports serialise consistently") {
  TestReport rep = decide(5.5, 3.2, StatisticVariant::Tn3, 2, 1222, 0.05, 4);
  rep.tn2_diagnostic = 2.0;
  std::ostringstream text;
  write_report_text(text, rep);
  CHECK(text.str().find("reject: true") != std::string::npos);
  CHECK(text.str().find("variant: T_n3") != std::string::npos);

  std::ostringstream js;
  write_report_json(js, rep);
  auto j = nlohmann::json::parse(js.str());
  CHECK(j["statistic"] == 5.5);
  CHECK(j["reject"] == true);
  CHECK(j["k0"] == 2);
  CHECK(j["clamp_events"] == 4);

  std::ostringstream csv;
  write_report_csv_header(csv);
  write_report_csv_row(csv, rep);
  std::istringstream rows(csv.str());
  std::string h, r;
  std::getline(rows, h);
  std::getline(rows, r);
  CHECK(std::count(h.begin(), h.end(), ',') == std::count(r.begin(), r.end(), ','));
}

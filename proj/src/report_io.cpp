#include "blockgof/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "blockgof/errors.hpp"

namespace blockgof {

using nlohmann::ordered_json;

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json-lines") return OutputFormat::JsonLines;
  throw ConfigError("format must be 'csv' or 'json-lines', got '" + std::string(text) + "'");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no NaN; absent values become null.
ordered_json real_json(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string optional_real(double v) { return std::isnan(v) ? "" : format_real(v); }

ordered_json report_json(const TestReport& r) {
  ordered_json j;
  j["variant"] = to_string(r.variant);
  j["statistic"] = real_json(r.statistic);
  j["L"] = real_json(r.L);
  j["k0"] = r.k0;
  j["n"] = r.n;
  j["alpha"] = r.alpha;
  j["lower_critical"] = r.lower_critical;
  j["upper_critical"] = r.upper_critical;
  j["reject"] = r.reject;
  j["p_value"] = real_json(r.p_value);
  j["clamp_events"] = r.clamp_events;
  j["membership_source"] = to_string(r.membership_source);
  j["tn2_diagnostic"] = real_json(r.tn2_diagnostic);
  return j;
}

}  // namespace

void write_report_text(std::ostream& out, const TestReport& r) {
  out << "variant: " << to_string(r.variant) << '\n'
      << "statistic: " << format_real(r.statistic) << '\n'
      << "L: " << format_real(r.L) << '\n'
      << "k0: " << r.k0 << '\n'
      << "n: " << r.n << '\n'
      << "alpha: " << format_real(r.alpha) << '\n'
      << "lower_critical: " << format_real(r.lower_critical) << '\n'
      << "upper_critical: " << format_real(r.upper_critical) << '\n'
      << "reject: " << (r.reject ? "true" : "false") << '\n'
      << "p_value: " << format_real(r.p_value) << '\n'
      << "clamp_events: " << r.clamp_events << '\n'
      << "membership_source: " << to_string(r.membership_source) << '\n';
  if (!std::isnan(r.tn2_diagnostic)) out << "tn2_diagnostic: " << format_real(r.tn2_diagnostic) << '\n';
}

void write_report_csv_header(std::ostream& out, bool with_label) {
  if (with_label) out << "label,";
  out << "variant,statistic,L,k0,n,alpha,lower_critical,upper_critical,reject,p_value,"
         "clamp_events,membership_source,tn2_diagnostic\n";
}

void write_report_csv_row(std::ostream& out, const TestReport& r, const std::string* label) {
  if (label) out << *label << ',';
  out << to_string(r.variant) << ',' << format_real(r.statistic) << ',' << format_real(r.L) << ','
      << r.k0 << ',' << r.n << ',' << format_real(r.alpha) << ',' << format_real(r.lower_critical)
      << ',' << format_real(r.upper_critical) << ',' << (r.reject ? "true" : "false") << ','
      << format_real(r.p_value) << ',' << r.clamp_events << ',' << to_string(r.membership_source)
      << ',' << optional_real(r.tn2_diagnostic) << '\n';
}

void write_report_json(std::ostream& out, const TestReport& r, const std::string* label) {
  ordered_json j;
  if (label) j["label"] = *label;
  j.update(report_json(r));
  out << j.dump() << '\n';
}

namespace {

std::string cell_k(const ResultRow& row) { return row.k > 0 ? std::to_string(row.k) : ""; }

ordered_json row_json(const ResultRow& row) {
  ordered_json j;
  j["experiment_id"] = row.experiment_id;
  j["k"] = row.k > 0 ? ordered_json(row.k) : ordered_json(nullptr);
  j["k0"] = row.k0;
  j["n"] = row.n;
  j["r"] = real_json(row.r);
  j["z"] = real_json(row.z);
  j["variant"] = to_string(row.variant);
  return j;
}

}  // namespace

void write_experiment(std::ostream& out, const ExperimentResult& result, OutputFormat format) {
  if (format == OutputFormat::Csv) out << kExperimentCsvHeader << '\n';
  for (const auto& row : result.rows) {
    if (format == OutputFormat::Csv) {
      out << row.experiment_id << ',' << cell_k(row) << ',' << row.k0 << ',' << row.n << ','
          << optional_real(row.r) << ',' << optional_real(row.z) << ',' << to_string(row.variant)
          << ',' << format_real(row.rejection_rate) << ',' << format_real(row.stderr_) << ','
          << optional_real(row.ks_stat) << ',' << row.clamp_total << ',' << row.seed << '\n';
    } else {
      ordered_json j = row_json(row);
      j["rejection_rate"] = row.rejection_rate;
      j["stderr"] = row.stderr_;
      j["ks_stat"] = real_json(row.ks_stat);
      j["clamp_total"] = row.clamp_total;
      j["seed"] = row.seed;
      out << j.dump() << '\n';
    }
  }
}

void write_experiment_samples(std::ostream& out, const ExperimentResult& result, OutputFormat format) {
  if (format == OutputFormat::Csv) out << "experiment_id,k,k0,n,r,z,variant,index,statistic\n";
  for (const auto& row : result.rows)
    for (std::size_t i = 0; i < row.statistics.size(); ++i) {
      if (format == OutputFormat::Csv) {
        out << row.experiment_id << ',' << cell_k(row) << ',' << row.k0 << ',' << row.n << ','
            << optional_real(row.r) << ',' << optional_real(row.z) << ',' << to_string(row.variant)
            << ',' << i << ',' << format_real(row.statistics[i]) << '\n';
      } else {
        ordered_json j = row_json(row);
        j["index"] = i;
        j["statistic"] = real_json(row.statistics[i]);
        out << j.dump() << '\n';
      }
    }
}

void write_assessment(std::ostream& out, const AlternativeAssessment& a, double ell_asymptotic,
                      OutputFormat format) {
  if (format == OutputFormat::Csv) {
    out << "ell,r_max,threshold,gamma,in_class,ell_asymptotic\n"
        << format_real(a.ell) << ',' << format_real(a.r_max) << ',' << format_real(a.threshold) << ','
        << format_real(a.gamma) << ',' << (a.in_class ? "true" : "false") << ','
        << optional_real(ell_asymptotic) << '\n';
    return;
  }
  ordered_json j;
  j["ell"] = a.ell;
  j["r_max"] = a.r_max;
  j["threshold"] = a.threshold;
  j["gamma"] = a.gamma;
  j["in_class"] = a.in_class;
  j["ell_asymptotic"] = real_json(ell_asymptotic);
  out << j.dump() << '\n';
}

}  // namespace blockgof

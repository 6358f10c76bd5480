#pragma once

#include <iosfwd>
#include <string>

#include "blockgof/gof_test.hpp"
#include "blockgof/harness.hpp"
#include "blockgof/power.hpp"

namespace blockgof {

enum class OutputFormat { Csv, JsonLines };

OutputFormat parse_output_format(std::string_view text);

/// Fixed header of the per-experiment CSV.
inline constexpr const char* kExperimentCsvHeader =
    "experiment_id,k,k0,n,r,z,variant,rejection_rate,stderr,ks_stat,clamp_total,seed";

/// Plain "key: value" lines, one per TestReport field.
void write_report_text(std::ostream& out, const TestReport& r);

/// Header plus one row, or one JSON object per line. `label` is an optional
/// leading column / field.
void write_report_csv_header(std::ostream& out, bool with_label = false);
void write_report_csv_row(std::ostream& out, const TestReport& r, const std::string* label = nullptr);
void write_report_json(std::ostream& out, const TestReport& r, const std::string* label = nullptr);

void write_experiment(std::ostream& out, const ExperimentResult& result, OutputFormat format);
/// One line per (cell, replication) statistic: cell columns plus the value.
void write_experiment_samples(std::ostream& out, const ExperimentResult& result, OutputFormat format);

void write_assessment(std::ostream& out, const AlternativeAssessment& a, double ell_asymptotic,
                      OutputFormat format);

/// Shortest decimal that parses back to the same double; "nan" / "inf" for
/// non-finite values, empty for not-applicable cells.
std::string format_real(double v);

}  // namespace blockgof

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prodperc/percolation.hpp"
#include "prodperc/product.hpp"

namespace prodperc {

enum class PRule {
  Absolute,       // p given directly
  Supercritical,  // (1 + eps) / d
  Subcritical,    // (1 - eps) / d
  COverT,         // c / t
  InvFourST,      // 1 / (4 s t)
};

PRule parse_p_rule(const std::string& name);
const char* to_string(PRule rule);

struct ExperimentSpec {
  std::string name;
  std::string kind = "census";  // census|supercritical|subcritical|unbounded_degree|many_stars|sprinkling
  std::string product_spec;
  PRule p_rule = PRule::Absolute;
  double p = 0.0;        // for PRule::Absolute
  double epsilon = 0.0;  // for the (1 +- eps)/d rules
  double c = 0.0;        // for PRule::COverT
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  // Named numeric knobs: k, p2, tolerances. Missing keys take per-experiment defaults.
  std::map<std::string, double> thresholds;
  std::vector<double> p_sweep;
  std::string output_path;

  double threshold(const std::string& key, double fallback) const;
};

// Reads "[experiment.NAME]" sections of "key = value" lines.
std::vector<ExperimentSpec> parse_config(std::istream& in);
std::vector<ExperimentSpec> load_config(const std::string& path);

struct TrialRecord {
  std::uint64_t seed = 0;
  double p = 0.0;
  std::uint64_t L1 = 0;
  std::uint64_t L2 = 0;
  std::uint64_t isolated = 0;
  double W_fraction = 0.0;
  double runtime_ms = 0.0;
  // Experiment-specific per-trial values; JSON only.
  std::map<std::string, double> extra;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct MetricSummary {
  std::string name;
  std::uint64_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

MetricSummary summarize(const std::string& name, const std::vector<double>& values);

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::uint64_t vertex_count = 0;
  double average_degree = 0.0;
  double p = 0.0;
  std::vector<TrialRecord> trials;
  std::vector<MetricSummary> metrics;
  std::map<std::string, double> values;
  std::vector<Check> checks;

  bool passed() const;
  const MetricSummary& metric(const std::string& name) const;
  const Check* check(const std::string& name) const;
};

// p for the spec's rule on graph g; `star_leaves` feeds the 1/(4st) rule.
double resolve_p(const ExperimentSpec& spec, const ProductGraph& g, std::optional<int> star_leaves);

ExperimentReport run_census_experiment(const ExperimentSpec& spec);
ExperimentReport run_supercritical(const ExperimentSpec& spec);
ExperimentReport run_subcritical(const ExperimentSpec& spec);
ExperimentReport run_unbounded_degree(const ExperimentSpec& spec);
ExperimentReport run_many_stars(const ExperimentSpec& spec);
ExperimentReport run_sprinkling(const ExperimentSpec& spec);
// Dispatches on spec.kind.
ExperimentReport run_experiment(const ExperimentSpec& spec);

enum class EmitFormat { Csv, Json };

// Column order is the TrialRecord declaration order.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool include_runtime = true);
std::string report_to_json(const ExperimentReport& report, bool include_runtime = true);
std::vector<TrialRecord> records_from_json(const std::string& text);
ExperimentSpec spec_from_json(const std::string& text);

void emit(const ExperimentReport& report, EmitFormat format, const std::string& path);

// seed,p,L1,L2,isolated,n_components
void write_census_csv_header(std::ostream& out);
void write_census_csv_row(std::ostream& out, const CensusResult& c);

// Float formatting shared by every emitter: 12 significant digits.
std::string format_double(double value);

}  // namespace prodperc

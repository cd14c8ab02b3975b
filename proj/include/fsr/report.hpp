#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include "fsr/baselines.hpp"
#include "fsr/fsr.hpp"

namespace fsr {

/// One output row. TSV columns appear in field order.
struct OutputRecord {
  std::size_t rank = 0;  ///< 1-based
  std::string pattern;
  double quality = 0.0;
  double frequency = 0.0;
  double threshold_margin = 0.0;
  bool significant = false;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

/// Result of any of the four methods in a common shape.
struct MethodOutcome {
  Method method = Method::conditional;
  BoundReport report;
  std::optional<QuantileEstimate> quantile;  ///< WY only
  std::vector<OutputRecord> records;
  std::size_t significant_count = 0;  ///< |O|
  double bound_seconds = 0.0;         ///< wall time of the bound phase
  double search_seconds = 0.0;        ///< wall time of the final search
};

/// Runs cfg.method. With cfg.top_k the records are the top-k patterns by
/// quality, each flagged; otherwise they are exactly the output set O.
MethodOutcome run_method(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg);
MethodOutcome run_method(const Dataset& d, const RunConfig& cfg);

std::vector<OutputRecord> to_records(const std::vector<Discovery>& discoveries, const Dataset& d);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void to_json(nlohmann::json& j, const BoundReport& r);
void from_json(const nlohmann::json& j, BoundReport& r);
void to_json(nlohmann::json& j, const OutputRecord& r);
void from_json(const nlohmann::json& j, OutputRecord& r);
void to_json(nlohmann::json& j, const QuantileEstimate& q);

/// Header line, one row per record, then the report as `# key=value` lines.
void write_tsv(std::ostream& out, const MethodOutcome& outcome);
nlohmann::json outcome_json(const MethodOutcome& outcome);
void write_json(std::ostream& out, const MethodOutcome& outcome);

/// Reads back the rows of a TSV produced by write_tsv (comment lines skipped).
std::vector<OutputRecord> read_tsv_records(std::istream& in);

/// Monte-Carlo harness summary.
struct TrialSummary {
  std::string method;
  std::size_t trials = 0;
  std::size_t rejections = 0;  ///< trials with |O| > 0
  double empirical_fwer = 0.0;
  std::size_t planted_hits = 0;

  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

void to_json(nlohmann::json& j, const TrialSummary& s);
void from_json(const nlohmann::json& j, TrialSummary& s);

/// FNV-1a over the fields that change a run's output (not `parallel`).
std::uint64_t config_hash(const RunConfig& cfg);

struct SweepCell {
  std::size_t c = 0;
  TestingMode mode = TestingMode::conditional;
  double epsilon = 0.0;
  double d_tilde = 0.0;
  double addend = 0.0;  ///< sqrt(ln(4/delta) / (2cm))
  double seconds = 0.0;
};

struct SweepResult {
  std::string dataset_id;
  std::uint64_t config_hash = 0;
  std::vector<SweepCell> cells;  ///< c-major, modes in the order given

  const SweepCell& cell(std::size_t c, TestingMode mode) const;
};

/// Bound pipeline per (c, mode) over one shared selector index. Cells run in
/// sequence; each is internally parallel.
SweepResult sweep_c(const Dataset& d, const RunConfig& cfg, const std::vector<std::size_t>& c_values,
                    const std::vector<TestingMode>& modes = {TestingMode::conditional, TestingMode::unconditional},
                    const std::string& dataset_id = "");
nlohmann::json sweep_json(const SweepResult& sweep);
void write_sweep_tsv(std::ostream& out, const SweepResult& sweep);

struct ComparisonRow {
  Method method = Method::conditional;
  double threshold = 0.0;  ///< epsilon, or the delta-quantile for WY
  double eps_T = 0.0;
  std::size_t significant_count = 0;
  double bound_seconds = 0.0;
};

std::vector<ComparisonRow> compare_methods(const Dataset& d, const RunConfig& cfg,
                                           const std::vector<Method>& methods = {Method::conditional,
                                                                                 Method::unconditional, Method::wy,
                                                                                 Method::ub});
nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows);
void write_comparison_tsv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace fsr

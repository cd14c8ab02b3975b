#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsr/data.hpp"
#include "fsr/fsr.hpp"
#include "fsr/language.hpp"
#include "fsr/report.hpp"
#include "fsr/search.hpp"

// Ground truth for the test suites. The enumerators walk every pattern with
// nested loops and evaluate it row by row; they share the data model and the
// selector alphabet with the engine but none of its search code.
namespace fsr::oracle {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kEnumerationGuard = 1'000'000;

/// Every pattern of the language, in canonical order. Throws OracleError past the guard.
std::vector<Pattern> enumerate_patterns(const Dataset& d, const LanguageConfig& cfg);

/// Row-wise count of (support, positives) followed by the shared quality formula.
QualityStat row_quality(const Pattern& p, const Dataset& d, const LabelVector& labels, double center);

/// Maximum quality over the language; -inf when the language is empty.
double brute_force_sup(const Dataset& d, const LabelVector& labels, double center, const LanguageConfig& cfg);
/// Every pattern with its quality, sorted by descending quality then canonical order.
std::vector<ScoredPattern> brute_force_all(const Dataset& d, const LabelVector& labels, double center,
                                           const LanguageConfig& cfg);
std::vector<ScoredPattern> brute_force_top_k(const Dataset& d, const LabelVector& labels, double center,
                                             const LanguageConfig& cfg, std::size_t k);
/// Patterns with quality >= base + slope * frequency, sorted like brute_force_all.
std::vector<ScoredPattern> brute_force_above(const Dataset& d, const LabelVector& labels, double center,
                                             double base, double slope, const LanguageConfig& cfg);

struct ColumnGen {
  enum class Kind { categorical, uniform, normal };
  Kind kind = Kind::categorical;
  std::string name;
  std::vector<double> probabilities;  ///< categorical; value k is named "v<k>" and has code k
  double a = 0.0;                     ///< uniform lower end, or normal mean
  double b = 1.0;                     ///< uniform upper end, or normal sd

  static ColumnGen categorical(std::string name, std::vector<double> probabilities);
  static ColumnGen uniform(std::string name, double lo, double hi);
  static ColumnGen normal(std::string name, double mean, double sd);
};

struct TargetRule {
  enum class Kind { null_iid, null_conditional, planted };
  Kind kind = Kind::null_iid;
  double mu = 0.5;     ///< null_iid
  std::size_t k = 0;   ///< null_conditional: exact number of ones
  Selector selector;   ///< planted
  double p_in = 0.9;   ///< planted: Pr(label = 1) on the selector's cover
  double p_out = 0.1;  ///< planted: Pr(label = 1) elsewhere

  static TargetRule null_iid(double mu);
  static TargetRule null_conditional(std::size_t k);
  static TargetRule planted(Selector selector, double p_in, double p_out);
  bool is_null() const { return kind != Kind::planted; }
};

struct SyntheticSpec {
  std::size_t m = 1000;
  std::vector<ColumnGen> columns;
  TargetRule target;
  std::uint64_t seed = 0;
};

/// Deterministic given spec.seed. Null rules draw labels independently of the features.
Dataset generate(const SyntheticSpec& spec);

/// 8124 rows, 22 categorical columns with the cardinalities of the UCI
/// mushroom table, exactly 3916 positive labels, and a few label-dependent columns.
Dataset mushroom_like(std::uint64_t seed);

/// Runs one method on one dataset with the given seed and returns O.
using Runner = std::function<std::vector<Discovery>(const Dataset&, std::uint64_t)>;

/// Runner for cfg.method; searches run single-threaded so trials can run in parallel.
Runner method_runner(RunConfig cfg);

/// T independent generate + run cycles. Trial t uses data seed derive_seed(base, 2t)
/// and run seed derive_seed(base, 2t + 1). A trial rejects when |O| > 0; it
/// hits when `planted` is in O.
TrialSummary monte_carlo(const SyntheticSpec& spec, const Runner& runner, std::size_t trials,
                         std::uint64_t base_seed, const std::optional<Pattern>& planted = std::nullopt,
                         const std::string& method = "");

/// Supremum over a fixed family of covers of the centered quality (center k/m),
/// sampled under exactly-k-ones permutations and under i.i.d. Bern(k/m) labels.
struct CouplingSamples {
  std::size_t m = 0;
  std::size_t k = 0;
  std::vector<double> conditional;
  std::vector<double> iid;
};

CouplingSamples coupling_samples(std::size_t m, std::size_t k, const std::vector<BitVector>& family,
                                 std::size_t samples, std::uint64_t seed);

struct CouplingPoint {
  double z = 0.0;
  double p_cond = 0.0;
  double p_iid = 0.0;
  double slack = 0.0;  ///< 3 sigma of p_cond - 2 p_iid
  bool holds = false;  ///< p_cond <= 2 p_iid + slack
};

std::vector<CouplingPoint> coupling_check(const CouplingSamples& samples, const std::vector<double>& thresholds);

}  // namespace fsr::oracle

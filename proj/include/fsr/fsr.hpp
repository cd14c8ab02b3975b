#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsr/bounds.hpp"
#include "fsr/data.hpp"
#include "fsr/language.hpp"
#include "fsr/search.hpp"

namespace fsr {

enum class Method {
  conditional,    ///< FSR-C: few-shot resampling, conditional null
  unconditional,  ///< FSR-U: few-shot resampling, i.i.d. null
  wy,             ///< Westfall-Young permutation quantile
  ub,             ///< Bonferroni over distinct projections, no resampling
};

std::string to_string(Method method);
Method parse_method(const std::string& text);
std::string method_label(Method method);  ///< fsr-c, fsr-u, wy, fsr-u-ub

enum class ProjectionSource { empirical, closed_form };

struct RunConfig {
  Method method = Method::conditional;
  double delta = 0.05;
  std::size_t resamples = 10;      ///< c
  std::size_t permutations = 1000;  ///< WY only
  std::uint64_t seed = 0;
  LanguageConfig language;
  std::optional<std::size_t> top_k;
  ProjectionSource n_hat_source = ProjectionSource::empirical;  ///< UB only
  bool parallel = true;

  void validate() const;
};

/// A pattern passing q(P) >= epsilon + eps_T * f(P) on the observed data.
struct Discovery {
  Pattern pattern;
  double quality = 0.0;
  double frequency = 0.0;
  double threshold_margin = 0.0;  ///< quality - (epsilon + eps_T * frequency), >= 0
};

struct RunResult {
  std::vector<Discovery> discoveries;  ///< descending quality, ties in canonical order
  BoundReport report;
};

/// Bound computation: eps_T, target brackets, c resamples at p = mu_hat,
/// per-resample suprema at center mu_check, their mean and epsilon.
BoundReport fsr_bounds(const SelectorIndex& index, const Dataset& d, TestingMode mode, const RunConfig& cfg);

/// All patterns meeting the report's threshold on the observed labels.
std::vector<Discovery> significant_patterns(const SelectorIndex& index, const Dataset& d, const BoundReport& report,
                                            bool parallel = true);

/// Full few-shot resampling run; cfg.method must be conditional or unconditional.
RunResult run_fsr(const Dataset& d, const RunConfig& cfg);
RunResult run_fsr(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg);

struct FlaggedTopK {
  TopKResult top;
  std::vector<bool> significant;
  std::vector<double> margins;
};

/// Top-k by observed quality, each flagged against the report's threshold.
FlaggedTopK flag_top_k(const SelectorIndex& index, const Dataset& d, const BoundReport& report, std::size_t k,
                       bool parallel = true);
FlaggedTopK flag_top_k(const Dataset& d, const RunConfig& cfg);

TestingMode testing_mode(Method method);

}  // namespace fsr

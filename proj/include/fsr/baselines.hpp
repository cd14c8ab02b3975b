#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fsr/fsr.hpp"

namespace fsr {

struct PermutationPlan {
  std::size_t count = 1000;  ///< number of label permutations
  std::uint64_t seed = 0;

  void validate() const;
};

/// delta-quantile of the permutation supremum deviations: the element at
/// 1-based position ceil(delta * p) of the deviations sorted in decreasing order.
struct QuantileEstimate {
  std::vector<double> deviations;  ///< sorted descending
  std::size_t position = 1;        ///< 1-based
  double delta_quantile = 0.0;
};

/// ceil(delta * p), clamped to [1, p]. Guarded against delta * p landing one
/// ulp above an integer.
std::size_t quantile_position(double delta, std::size_t permutations);
QuantileEstimate make_quantile(std::vector<double> deviations, double delta);

/// Uniform permutation j of the labels (Fisher-Yates keyed on (seed, j)).
LabelVector permute_labels(const LabelVector& labels, std::uint64_t seed, std::size_t j);

/// Supremum deviation at `center` for each permutation, in permutation order.
std::vector<double> permutation_deviations(const SelectorIndex& index, const LabelVector& labels, double center,
                                           const PermutationPlan& plan, bool parallel = true);

struct WyResult {
  std::vector<Discovery> discoveries;
  QuantileEstimate quantile;
  BoundReport report;  ///< method wy; epsilon holds the quantile
};

struct WyBounds {
  BoundReport report;
  QuantileEstimate quantile;
};

/// Permutation phase: cfg.permutations permutations keyed on cfg.seed, deviations at center mu(D).
WyBounds wy_bounds(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg);
WyResult run_wy(const Dataset& d, const RunConfig& cfg);
WyResult run_wy(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg);

/// ln N^ for the projection-count baseline.
double projection_count_log(const Dataset& d, const LanguageConfig& cfg, ProjectionSource source);

/// Bonferroni over the distinct projections: no resamples, unconditional eps_T.
/// ln N^ comes from cfg.n_hat_source.
BoundReport ub_bounds(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg);
RunResult run_ub(const Dataset& d, const RunConfig& cfg);
RunResult run_ub(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg);

namespace serial {

std::vector<double> permutation_deviations(const SelectorIndex& index, const LabelVector& labels, double center,
                                           const PermutationPlan& plan);

}  // namespace serial

}  // namespace fsr

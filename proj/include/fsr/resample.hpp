#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fsr/data.hpp"
#include "fsr/search.hpp"

namespace fsr {

/// c label vectors with i.i.d. Bern(p) entries; entry (i, j) is keyed on (seed, j, i).
struct ResamplePlan {
  std::size_t count = 10;
  double p = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct DeviationEstimate {
  std::vector<double> d;  ///< per-resample supremum d_j
  double d_tilde = 0.0;   ///< mean of d (compensated sum)
};

/// Resampled label vector j of length m.
LabelVector resample_labels(std::size_t m, double p, std::uint64_t seed, std::size_t j);
std::vector<LabelVector> resample_target(const Dataset& d, const ResamplePlan& plan);

/// Neumaier-compensated mean, summed in index order.
double compensated_mean(std::span<const double> values);

/// d_j = sup over the language of the centered quality on resample j; resamples
/// are generated on the fly and run as independent parallel tasks.
DeviationEstimate estimate_deviation(const SelectorIndex& index, const ResamplePlan& plan, double center,
                                     bool parallel = true);
DeviationEstimate estimate_deviation(const SelectorIndex& index, std::span<const LabelVector> resamples,
                                     double center, bool parallel = true);
DeviationEstimate estimate_deviation(const Dataset& d, std::span<const LabelVector> resamples, double center,
                                     const LanguageConfig& cfg);

namespace serial {

DeviationEstimate estimate_deviation(const SelectorIndex& index, const ResamplePlan& plan, double center);

}  // namespace serial

}  // namespace fsr

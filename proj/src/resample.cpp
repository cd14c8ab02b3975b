#include "fsr/resample.hpp"

#include <cmath>

#include "fsr/rng.hpp"

namespace fsr {

void ResamplePlan::validate() const {
  if (count < 1) throw ConfigError("resample count c must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("Bernoulli parameter must lie in [0, 1]");
}

LabelVector resample_labels(std::size_t m, double p, std::uint64_t seed, std::size_t j) {
  BitVector bits(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (counter_bernoulli(seed, j, i, p)) bits.set(i);
  }
  return LabelVector(std::move(bits));
}

std::vector<LabelVector> resample_target(const Dataset& d, const ResamplePlan& plan) {
  plan.validate();
  std::vector<LabelVector> out;
  out.reserve(plan.count);
  for (std::size_t j = 0; j < plan.count; ++j) out.push_back(resample_labels(d.m(), plan.p, plan.seed, j));
  return out;
}

double compensated_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return (sum + carry) / static_cast<double>(values.size());
}

DeviationEstimate estimate_deviation(const SelectorIndex& index, const ResamplePlan& plan, double center,
                                     bool parallel) {
  plan.validate();
  DeviationEstimate est;
  est.d.resize(plan.count);
  const auto c = static_cast<std::int64_t>(plan.count);
#pragma omp parallel for schedule(dynamic, 1) if (parallel && c > 1)
  for (std::int64_t j = 0; j < c; ++j) {
    const auto labels = resample_labels(index.m(), plan.p, plan.seed, static_cast<std::size_t>(j));
    est.d[static_cast<std::size_t>(j)] = sup_quality(index, labels, center, {.prune = true, .parallel = false}).supremum;
  }
  est.d_tilde = compensated_mean(est.d);
  return est;
}

DeviationEstimate estimate_deviation(const SelectorIndex& index, std::span<const LabelVector> resamples,
                                     double center, bool parallel) {
  DeviationEstimate est;
  est.d.resize(resamples.size());
  const auto c = static_cast<std::int64_t>(resamples.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel && c > 1)
  for (std::int64_t j = 0; j < c; ++j) {
    est.d[static_cast<std::size_t>(j)] =
        sup_quality(index, resamples[static_cast<std::size_t>(j)], center, {.prune = true, .parallel = false})
            .supremum;
  }
  est.d_tilde = compensated_mean(est.d);
  return est;
}

DeviationEstimate estimate_deviation(const Dataset& d, std::span<const LabelVector> resamples, double center,
                                     const LanguageConfig& cfg) {
  return estimate_deviation(SelectorIndex(d, cfg), resamples, center);
}

namespace serial {

DeviationEstimate estimate_deviation(const SelectorIndex& index, const ResamplePlan& plan, double center) {
  plan.validate();
  DeviationEstimate est;
  for (std::size_t j = 0; j < plan.count; ++j) {
    const auto labels = resample_labels(index.m(), plan.p, plan.seed, j);
    est.d.push_back(serial::sup_quality(index, labels, center, true).supremum);
  }
  est.d_tilde = compensated_mean(est.d);
  return est;
}

}  // namespace serial

}  // namespace fsr

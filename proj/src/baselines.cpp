#include "fsr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fsr/resample.hpp"
#include "fsr/rng.hpp"

namespace fsr {
namespace {

// Permutation streams are keyed apart from the Bernoulli resample streams.
constexpr std::uint64_t kPermutationSalt = 0x5759'7065'726dULL;

}  // namespace

void PermutationPlan::validate() const {
  if (count < 1) throw ConfigError("permutation count must be >= 1");
}

std::size_t quantile_position(double delta, std::size_t permutations) {
  check_delta(delta);
  if (permutations < 1) throw ConfigError("permutation count must be >= 1");
  const long double product = static_cast<long double>(delta) * static_cast<long double>(permutations);
  const long double nearest = std::round(product);
  const long double pos = std::fabs(product - nearest) <= 1e-9L * std::max(1.0L, product) ? nearest : std::ceil(product);
  return std::clamp<std::size_t>(static_cast<std::size_t>(pos), 1, permutations);
}

QuantileEstimate make_quantile(std::vector<double> deviations, double delta) {
  if (deviations.empty()) throw ConfigError("quantile of an empty deviation list");
  QuantileEstimate q;
  std::sort(deviations.begin(), deviations.end(), std::greater<>());
  q.position = quantile_position(delta, deviations.size());
  q.delta_quantile = deviations[q.position - 1];
  q.deviations = std::move(deviations);
  return q;
}

LabelVector permute_labels(const LabelVector& labels, std::uint64_t seed, std::size_t j) {
  const std::size_t m = labels.size();
  std::vector<std::uint8_t> values(m);
  for (std::size_t i = 0; i < m; ++i) values[i] = labels[i] ? 1 : 0;
  const std::uint64_t key = derive_seed(seed, kPermutationSalt);
  for (std::size_t i = m; i > 1; --i) {
    const auto k = static_cast<std::size_t>(counter_below(key, j, i - 1, i));
    std::swap(values[i - 1], values[k]);
  }
  BitVector bits(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (values[i]) bits.set(i);
  }
  return LabelVector(std::move(bits));
}

std::vector<double> permutation_deviations(const SelectorIndex& index, const LabelVector& labels, double center,
                                           const PermutationPlan& plan, bool parallel) {
  plan.validate();
  std::vector<double> out(plan.count);
  const auto p = static_cast<std::int64_t>(plan.count);
#pragma omp parallel for schedule(dynamic, 4) if (parallel && p > 1)
  for (std::int64_t j = 0; j < p; ++j) {
    const auto permuted = permute_labels(labels, plan.seed, static_cast<std::size_t>(j));
    out[static_cast<std::size_t>(j)] = sup_quality(index, permuted, center, {.prune = true, .parallel = false}).supremum;
  }
  return out;
}

WyBounds wy_bounds(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  if (index.size() == 0) throw ConfigError("pattern language is empty for this dataset");
  const double mu = mean_target(d);
  const PermutationPlan plan{cfg.permutations, cfg.seed};
  WyBounds out;
  out.quantile = make_quantile(permutation_deviations(index, d.target(), mu, plan, cfg.parallel), cfg.delta);

  auto& r = out.report;
  r.method = "wy";
  r.mode = TestingMode::conditional;
  r.delta = cfg.delta;
  r.m = d.m();
  r.c = plan.count;
  r.mu_D = mu;
  r.mu_hat = mu;
  r.mu_check = mu;
  r.eps_T = 0.0;
  r.d_tilde = compensated_mean(out.quantile.deviations);
  r.epsilon = out.quantile.delta_quantile;
  r.sup_freq = index.sup_frequency();
  return out;
}

WyResult run_wy(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg) {
  auto bounds = wy_bounds(index, d, cfg);
  WyResult result;
  result.discoveries = significant_patterns(index, d, bounds.report, cfg.parallel);
  result.report = std::move(bounds.report);
  result.quantile = std::move(bounds.quantile);
  return result;
}

WyResult run_wy(const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  return run_wy(SelectorIndex(d, cfg.language), d, cfg);
}

double projection_count_log(const Dataset& d, const LanguageConfig& cfg, ProjectionSource source) {
  if (source == ProjectionSource::empirical) {
    const auto n = count_distinct_projections(d, cfg);
    return n <= 1 ? 0.0 : std::log(static_cast<double>(n));
  }
  return std::max(0.0, projection_bound_closed_form_log(d.m(), std::max<std::size_t>(d.feature_count(), 1),
                                                        cfg.max_length));
}

BoundReport ub_bounds(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  if (index.size() == 0) throw ConfigError("pattern language is empty for this dataset");
  BoundReport r;
  r.method = "fsr-u-ub";
  r.mode = TestingMode::unconditional;
  r.delta = cfg.delta;
  r.m = d.m();
  r.c = 0;
  r.mu_D = mean_target(d);
  r.sup_freq = index.sup_frequency();
  r.eps_T = bound_target(TestingMode::unconditional, r.mu_D, d.m(), cfg.delta);
  const auto brackets = target_brackets(r.mu_D, r.eps_T);
  r.mu_hat = brackets.mu_hat;
  r.mu_check = brackets.mu_check;
  const auto nu = nu_plugin(r.mu_D, r.eps_T);
  r.nu_T = nu.nu_T;
  r.nu = nu.nu;
  r.nu_source = "plugin";
  r.n_hat_log = projection_count_log(d, cfg.language, cfg.n_hat_source);
  const auto bound = bound_statistic_ub(*r.n_hat_log, nu.nu_T, nu.nu, d.m(), cfg.delta);
  r.r_hat = bound.r_hat;
  r.d_hat = bound.d_hat;
  r.epsilon = bound.epsilon;
  return r;
}

RunResult run_ub(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg) {
  RunResult result;
  result.report = ub_bounds(index, d, cfg);
  result.discoveries = significant_patterns(index, d, result.report, cfg.parallel);
  return result;
}

RunResult run_ub(const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  return run_ub(SelectorIndex(d, cfg.language), d, cfg);
}

namespace serial {

std::vector<double> permutation_deviations(const SelectorIndex& index, const LabelVector& labels, double center,
                                           const PermutationPlan& plan) {
  plan.validate();
  std::vector<double> out;
  for (std::size_t j = 0; j < plan.count; ++j) {
    out.push_back(serial::sup_quality(index, permute_labels(labels, plan.seed, j), center, true).supremum);
  }
  return out;
}

}  // namespace serial

}  // namespace fsr

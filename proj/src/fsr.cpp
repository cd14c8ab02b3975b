#include "fsr/fsr.hpp"

#include "fsr/resample.hpp"

namespace fsr {

std::string to_string(Method method) {
  switch (method) {
    case Method::conditional: return "conditional";
    case Method::unconditional: return "unconditional";
    case Method::wy: return "wy";
    case Method::ub: return "ub";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "conditional") return Method::conditional;
  if (text == "unconditional") return Method::unconditional;
  if (text == "wy") return Method::wy;
  if (text == "ub") return Method::ub;
  throw ConfigError("unknown mode '" + text + "'");
}

std::string method_label(Method method) {
  switch (method) {
    case Method::conditional: return "fsr-c";
    case Method::unconditional: return "fsr-u";
    case Method::wy: return "wy";
    case Method::ub: return "fsr-u-ub";
  }
  return "?";
}

TestingMode testing_mode(Method method) {
  return (method == Method::conditional || method == Method::wy) ? TestingMode::conditional
                                                                  : TestingMode::unconditional;
}

void RunConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (resamples < 1) throw ConfigError("resamples must be >= 1");
  if (permutations < 1) throw ConfigError("permutations must be >= 1");
  if (top_k && *top_k < 1) throw ConfigError("top-k must be >= 1");
  language.validate();
}

BoundReport fsr_bounds(const SelectorIndex& index, const Dataset& d, TestingMode mode, const RunConfig& cfg) {
  cfg.validate();
  if (index.size() == 0) throw ConfigError("pattern language is empty for this dataset");
  BoundReport report;
  report.method = mode == TestingMode::conditional ? "fsr-c" : "fsr-u";
  report.mode = mode;
  report.delta = cfg.delta;
  report.m = d.m();
  report.c = cfg.resamples;
  report.mu_D = mean_target(d);
  report.sup_freq = index.sup_frequency();

  report.eps_T = bound_target(mode, report.mu_D, d.m(), cfg.delta);
  const auto brackets = target_brackets(report.mu_D, report.eps_T);
  report.mu_hat = brackets.mu_hat;
  report.mu_check = brackets.mu_check;

  const ResamplePlan plan{cfg.resamples, report.mu_hat, cfg.seed};
  auto deviation = estimate_deviation(index, plan, report.mu_check, cfg.parallel);
  report.d_tilde = deviation.d_tilde;
  report.d_values = std::move(deviation.d);

  if (mode == TestingMode::conditional) {
    report.omega = omega(report.mu_D, report.sup_freq);
    report.epsilon = bound_statistic_conditional(report.d_tilde, *report.omega, d.m(), cfg.resamples, cfg.delta);
  } else {
    const auto nu = nu_plugin(report.mu_D, report.eps_T);
    report.nu_T = nu.nu_T;
    report.nu = nu.nu;
    report.nu_source = "plugin";
    const auto bound = bound_statistic_unconditional(report.d_tilde, nu.nu_T, nu.nu, d.m(), cfg.resamples, cfg.delta);
    report.r_hat = bound.r_hat;
    report.d_hat = bound.d_hat;
    report.epsilon = bound.epsilon;
  }
  return report;
}

std::vector<Discovery> significant_patterns(const SelectorIndex& index, const Dataset& d, const BoundReport& report,
                                            bool parallel) {
  const auto found = patterns_above(index, d.target(), mean_target(d), report.epsilon, report.eps_T,
                                    {.prune = true, .parallel = parallel});
  std::vector<Discovery> out;
  out.reserve(found.size());
  for (const auto& sp : found) {
    out.push_back(Discovery{sp.pattern, sp.stat.value, sp.stat.frequency,
                            sp.stat.value - report.threshold(sp.stat.frequency)});
  }
  return out;
}

RunResult run_fsr(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg) {
  if (cfg.method != Method::conditional && cfg.method != Method::unconditional) {
    throw ConfigError("run_fsr handles the conditional and unconditional modes only");
  }
  RunResult result;
  result.report = fsr_bounds(index, d, testing_mode(cfg.method), cfg);
  result.discoveries = significant_patterns(index, d, result.report, cfg.parallel);
  return result;
}

RunResult run_fsr(const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  return run_fsr(SelectorIndex(d, cfg.language), d, cfg);
}

FlaggedTopK flag_top_k(const SelectorIndex& index, const Dataset& d, const BoundReport& report, std::size_t k,
                       bool parallel) {
  FlaggedTopK out;
  out.top = top_k(index, d.target(), mean_target(d), k, {.prune = true, .parallel = parallel});
  for (const auto& e : out.top.entries) {
    const double margin = e.stat.value - report.threshold(e.stat.frequency);
    out.margins.push_back(margin);
    out.significant.push_back(margin >= 0.0);
  }
  return out;
}

FlaggedTopK flag_top_k(const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.top_k) throw ConfigError("flag_top_k requires top_k");
  if (cfg.method != Method::conditional && cfg.method != Method::unconditional) {
    throw ConfigError("flag_top_k handles the conditional and unconditional modes only");
  }
  const SelectorIndex index(d, cfg.language);
  const auto report = fsr_bounds(index, d, testing_mode(cfg.method), cfg);
  return flag_top_k(index, d, report, *cfg.top_k, cfg.parallel);
}

}  // namespace fsr

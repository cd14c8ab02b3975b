#include "fsr/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "fsr/language.hpp"
#include "fsr/search.hpp"

namespace fsr::validation {
namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

oracle::ColumnGen binary(const std::string& name) { return oracle::ColumnGen::categorical(name, {0.5, 0.5}); }

bool same(const std::vector<ScoredPattern>& a, const std::vector<ScoredPattern>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].pattern != b[i].pattern || a[i].stat.value != b[i].stat.value) return false;
  }
  return true;
}

// One random instance: m <= 30, at most four columns mixing categorical and
// continuous (with ties), z <= 2, a random non-empty subset of the forms.
struct Instance {
  Dataset data;
  LanguageConfig cfg;
  double center;
};

Instance random_instance(std::mt19937_64& rng) {
  const auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t m = pick(1, 30);
  const std::size_t columns = pick(1, 4);
  std::vector<FeatureColumn> features;
  for (std::size_t c = 0; c < columns; ++c) {
    const std::string name = "c" + std::to_string(c);
    if (pick(0, 1) == 0) {
      const std::size_t n = pick(1, 4);
      std::vector<std::int32_t> codes(m);
      for (auto& code : codes) code = static_cast<std::int32_t>(pick(0, n - 1));
      std::vector<std::string> dict;
      for (std::size_t k = 0; k < n; ++k) dict.push_back("v" + std::to_string(k));
      features.push_back(FeatureColumn::categorical(name, std::move(codes), std::move(dict)));
    } else {
      const std::size_t levels = pick(1, 12);
      std::vector<double> values(m);
      for (auto& v : values) v = static_cast<double>(pick(0, levels)) * 0.25 - 1.0;
      features.push_back(FeatureColumn::continuous(name, std::move(values)));
    }
  }
  BitVector bits(m);
  const double rate = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::bernoulli_distribution(rate)(rng)) bits.set(i);
  }
  LanguageConfig cfg;
  cfg.max_length = pick(1, 2);
  cfg.bins = pick(1, 4);
  cfg.forms = FormSet{};
  while (cfg.forms.empty()) {
    for (auto f : {SelectorForm::equals, SelectorForm::less_than, SelectorForm::at_least, SelectorForm::interval}) {
      if (pick(0, 1)) cfg.forms.insert(f);
    }
  }
  Dataset data(std::move(features), LabelVector(std::move(bits)));
  const double center =
      pick(0, 1) ? mean_target(data) : std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return {std::move(data), cfg, center};
}

}  // namespace

double fwer_band(double delta, std::size_t trials) {
  return delta + 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
}

oracle::SyntheticSpec fwer_spec(TestingMode mode) {
  oracle::SyntheticSpec spec;
  spec.m = 2000;
  for (int c = 0; c < 5; ++c) spec.columns.push_back(binary("b" + std::to_string(c)));
  spec.target = mode == TestingMode::conditional ? oracle::TargetRule::null_conditional(600)
                                                 : oracle::TargetRule::null_iid(0.3);
  return spec;
}

oracle::SyntheticSpec planted_spec() {
  oracle::SyntheticSpec spec;
  spec.m = 5000;
  spec.columns.push_back(oracle::ColumnGen::categorical("planted", {0.2, 0.2, 0.2, 0.2, 0.2}));
  for (int c = 0; c < 4; ++c) spec.columns.push_back(binary("noise" + std::to_string(c)));
  spec.target = oracle::TargetRule::planted(Selector::equals(0, 0), 0.9, 0.1);
  return spec;
}

Pattern planted_pattern() { return Pattern({Selector::equals(0, 0)}); }

oracle::SyntheticSpec ordering_spec(std::uint64_t seed) {
  oracle::SyntheticSpec spec;
  spec.m = 10000;
  for (int c = 0; c < 8; ++c) {
    spec.columns.push_back(oracle::ColumnGen::categorical("a" + std::to_string(c), {0.2, 0.2, 0.2, 0.2, 0.2}));
  }
  spec.target = oracle::TargetRule::null_iid(0.25);
  spec.seed = seed;
  return spec;
}

RunConfig suite_config(Method method, std::size_t depth) {
  RunConfig cfg;
  cfg.method = method;
  cfg.language.max_length = depth;
  return cfg;
}

SuiteResult oracle_suite(std::size_t instances, std::uint64_t seed) {
  SuiteResult r;
  r.name = "oracle";
  std::mt19937_64 rng(seed);
  std::size_t mismatches = 0;
  std::size_t patterns_checked = 0;
  for (std::size_t n = 0; n < instances; ++n) {
    const auto inst = random_instance(rng);
    const auto& labels = inst.data.target();
    const SelectorIndex index(inst.data, inst.cfg);
    const auto truth = oracle::brute_force_all(inst.data, labels, inst.center, inst.cfg);
    patterns_checked += truth.size();

    const double brute = oracle::brute_force_sup(inst.data, labels, inst.center, inst.cfg);
    const auto par = sup_quality(index, labels, inst.center);
    const auto ser = serial::sup_quality(index, labels, inst.center, true);
    const auto unpruned = sup_quality(index, labels, inst.center, {.prune = false, .parallel = false});
    bool ok = par.supremum == brute && ser.supremum == brute && unpruned.supremum == brute;
    if (!truth.empty()) ok = ok && par.argmax && *par.argmax == truth.front().pattern;

    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const auto expected_top = oracle::brute_force_top_k(inst.data, labels, inst.center, inst.cfg, k);
    ok = ok && same(top_k(index, labels, inst.center, k).entries, expected_top);
    ok = ok && same(serial::top_k(index, labels, inst.center, k, true).entries, expected_top);

    const double base = std::uniform_real_distribution<double>(-0.1, 0.2)(rng);
    const double slope = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    ok = ok && same(patterns_above(index, labels, inst.center, base, slope),
                    oracle::brute_force_above(inst.data, labels, inst.center, base, slope, inst.cfg));
    if (!ok) {
      ++mismatches;
      r.lines.push_back("mismatch on instance " + std::to_string(n));
    }
  }
  r.pass = mismatches == 0;
  r.lines.push_back(std::to_string(instances) + " instances, " + std::to_string(patterns_checked) +
                    " patterns, " + std::to_string(mismatches) + " mismatches");
  r.details = {{"instances", instances}, {"patterns", patterns_checked}, {"mismatches", mismatches}};
  return r;
}

SuiteResult fwer_suite(Method method, std::size_t trials, std::uint64_t seed) {
  SuiteResult r;
  r.name = "fwer-" + method_label(method);
  const auto cfg = suite_config(method, 2);
  const auto summary = oracle::monte_carlo(fwer_spec(testing_mode(method)), oracle::method_runner(cfg), trials, seed,
                                           std::nullopt, method_label(method));
  const double band = fwer_band(cfg.delta, trials);
  r.pass = summary.empirical_fwer <= band;
  r.lines.push_back(method_label(method) + ": empirical FWER " + fixed(summary.empirical_fwer) + " (" +
                    std::to_string(summary.rejections) + "/" + std::to_string(trials) + "), band " + fixed(band));
  r.details = {{"summary", summary}, {"band", band}};
  return r;
}

SuiteResult power_suite(Method method, std::size_t trials, std::uint64_t seed, double required_rate) {
  SuiteResult r;
  r.name = "power-" + method_label(method);
  const auto cfg = suite_config(method, 2);
  const auto summary = oracle::monte_carlo(planted_spec(), oracle::method_runner(cfg), trials, seed,
                                           planted_pattern(), method_label(method));
  const double rate = static_cast<double>(summary.planted_hits) / static_cast<double>(trials);
  r.pass = rate >= required_rate;
  r.lines.push_back(method_label(method) + ": planted pattern found in " + std::to_string(summary.planted_hits) +
                    "/" + std::to_string(trials) + " trials (" + fixed(rate, 3) + "), required " +
                    fixed(required_rate, 2));
  r.details = {{"summary", summary}, {"rate", rate}, {"required", required_rate}};
  return r;
}

SuiteResult coupling_suite(std::size_t samples, std::uint64_t seed) {
  SuiteResult r;
  r.name = "coupling";
  constexpr std::size_t m = 20;
  constexpr std::size_t k = 10;
  std::vector<BitVector> family(3, BitVector(m));
  for (std::size_t i = 0; i < 5; ++i) family[0].set(i);
  for (std::size_t i = 0; i < 10; ++i) family[1].set(i);
  for (std::size_t i = 0; i < m; i += 2) family[2].set(i);

  const auto sample = oracle::coupling_samples(m, k, family, samples, seed);
  std::vector<double> thresholds;
  for (double q : {0.5, 0.9, 0.99}) thresholds.push_back(empirical_quantile(sample.conditional, q));
  const auto points = oracle::coupling_check(sample, thresholds);
  r.pass = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& pt : points) {
    r.pass = r.pass && pt.holds;
    r.lines.push_back("z=" + fixed(pt.z) + ": p_cond " + fixed(pt.p_cond) + " <= 2 * p_iid " +
                      fixed(2.0 * pt.p_iid) + " + " + fixed(pt.slack) + (pt.holds ? "" : "  VIOLATED"));
    rows.push_back({{"z", pt.z}, {"p_cond", pt.p_cond}, {"p_iid", pt.p_iid}, {"slack", pt.slack},
                    {"holds", pt.holds}});
  }
  r.details = {{"m", m}, {"k", k}, {"samples", samples}, {"points", rows}};
  return r;
}

}  // namespace fsr::validation

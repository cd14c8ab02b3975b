#include "fsr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fsr/baselines.hpp"
#include "fsr/rng.hpp"

namespace fsr::oracle {
namespace {

constexpr std::uint64_t kLabelSalt = 0x6c6162656c73ULL;

void extend(const std::vector<Selector>& base, std::size_t start, std::vector<Selector>& prefix, std::size_t z,
            std::vector<Pattern>& out) {
  for (std::size_t i = start; i < base.size(); ++i) {
    if (!prefix.empty() && base[i].column <= prefix.back().column) continue;
    prefix.push_back(base[i]);
    out.emplace_back(prefix);
    if (prefix.size() < z) extend(base, i + 1, prefix, z, out);
    prefix.pop_back();
  }
}

bool sorted_before(const ScoredPattern& a, const ScoredPattern& b) {
  if (a.stat.value != b.stat.value) return a.stat.value > b.stat.value;
  return a.pattern < b.pattern;
}

// Exactly k of the m positions set, uniformly at random (partial Fisher-Yates).
BitVector k_subset(std::size_t m, std::size_t k, std::uint64_t key, std::uint64_t stream) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  BitVector bits(m);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(counter_below(key, stream, i, m - i));
    std::swap(idx[i], idx[j]);
    bits.set(idx[i]);
  }
  return bits;
}

std::int32_t draw_categorical(const std::vector<double>& probabilities, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < probabilities.size(); ++k) {
    acc += probabilities[k];
    if (u < acc) return static_cast<std::int32_t>(k);
  }
  return static_cast<std::int32_t>(probabilities.size() - 1);
}

std::vector<std::string> value_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back("v" + std::to_string(k));
  return out;
}

FeatureColumn generate_column(const ColumnGen& gen, std::size_t m, std::uint64_t key) {
  switch (gen.kind) {
    case ColumnGen::Kind::categorical: {
      std::vector<std::int32_t> codes(m);
      for (std::size_t i = 0; i < m; ++i) codes[i] = draw_categorical(gen.probabilities, counter_uniform(key, 0, i));
      return FeatureColumn::categorical(gen.name, std::move(codes), value_names(gen.probabilities.size()));
    }
    case ColumnGen::Kind::uniform: {
      std::vector<double> values(m);
      for (std::size_t i = 0; i < m; ++i) values[i] = gen.a + (gen.b - gen.a) * counter_uniform(key, 0, i);
      return FeatureColumn::continuous(gen.name, std::move(values));
    }
    case ColumnGen::Kind::normal: {
      std::vector<double> values(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double u1 = 1.0 - counter_uniform(key, 0, i);  // (0, 1]
        const double u2 = counter_uniform(key, 1, i);
        values[i] = gen.a + gen.b * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      }
      return FeatureColumn::continuous(gen.name, std::move(values));
    }
  }
  throw OracleError("unknown column generator");
}

}  // namespace

std::vector<Pattern> enumerate_patterns(const Dataset& d, const LanguageConfig& cfg) {
  cfg.validate();
  const auto base = base_selectors(d, cfg);
  if (language_size(base, cfg.max_length) > kEnumerationGuard) {
    throw OracleError("language too large to enumerate");
  }
  std::vector<Pattern> out;
  std::vector<Selector> prefix;
  extend(base, 0, prefix, cfg.max_length, out);
  std::sort(out.begin(), out.end());
  return out;
}

QualityStat row_quality(const Pattern& p, const Dataset& d, const LabelVector& labels, double center) {
  std::size_t support = 0;
  std::size_t positives = 0;
  for (std::size_t row = 0; row < d.m(); ++row) {
    bool all = true;
    for (const auto& s : p.selectors()) {
      if (!s.holds(d, row)) {
        all = false;
        break;
      }
    }
    if (!all) continue;
    ++support;
    if (labels[row]) ++positives;
  }
  const double m = static_cast<double>(d.m());
  return {quality_from_counts(positives, support, d.m(), center), static_cast<double>(support) / m, positives,
          support};
}

double brute_force_sup(const Dataset& d, const LabelVector& labels, double center, const LanguageConfig& cfg) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : enumerate_patterns(d, cfg)) best = std::max(best, row_quality(p, d, labels, center).value);
  return best;
}

std::vector<ScoredPattern> brute_force_all(const Dataset& d, const LabelVector& labels, double center,
                                           const LanguageConfig& cfg) {
  std::vector<ScoredPattern> out;
  for (auto& p : enumerate_patterns(d, cfg)) {
    const auto stat = row_quality(p, d, labels, center);
    out.push_back({std::move(p), stat});
  }
  std::stable_sort(out.begin(), out.end(), sorted_before);
  return out;
}

std::vector<ScoredPattern> brute_force_top_k(const Dataset& d, const LabelVector& labels, double center,
                                             const LanguageConfig& cfg, std::size_t k) {
  auto all = brute_force_all(d, labels, center, cfg);
  if (all.size() > k) all.erase(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  return all;
}

std::vector<ScoredPattern> brute_force_above(const Dataset& d, const LabelVector& labels, double center,
                                             double base, double slope, const LanguageConfig& cfg) {
  auto all = brute_force_all(d, labels, center, cfg);
  std::erase_if(all, [&](const ScoredPattern& sp) { return !(sp.stat.value >= base + slope * sp.stat.frequency); });
  return all;
}

ColumnGen ColumnGen::categorical(std::string name, std::vector<double> probabilities) {
  if (probabilities.empty()) throw OracleError("categorical generator needs at least one value");
  ColumnGen g;
  g.kind = Kind::categorical;
  g.name = std::move(name);
  g.probabilities = std::move(probabilities);
  return g;
}

ColumnGen ColumnGen::uniform(std::string name, double lo, double hi) {
  ColumnGen g;
  g.kind = Kind::uniform;
  g.name = std::move(name);
  g.a = lo;
  g.b = hi;
  return g;
}

ColumnGen ColumnGen::normal(std::string name, double mean, double sd) {
  ColumnGen g;
  g.kind = Kind::normal;
  g.name = std::move(name);
  g.a = mean;
  g.b = sd;
  return g;
}

TargetRule TargetRule::null_iid(double mu) {
  TargetRule r;
  r.kind = Kind::null_iid;
  r.mu = mu;
  return r;
}

TargetRule TargetRule::null_conditional(std::size_t k) {
  TargetRule r;
  r.kind = Kind::null_conditional;
  r.k = k;
  return r;
}

TargetRule TargetRule::planted(Selector selector, double p_in, double p_out) {
  TargetRule r;
  r.kind = Kind::planted;
  r.selector = selector;
  r.p_in = p_in;
  r.p_out = p_out;
  return r;
}

Dataset generate(const SyntheticSpec& spec) {
  if (spec.m < 1) throw OracleError("synthetic m must be >= 1");
  std::vector<FeatureColumn> features;
  for (std::size_t c = 0; c < spec.columns.size(); ++c) {
    features.push_back(generate_column(spec.columns[c], spec.m, derive_seed(spec.seed, c + 1)));
  }

  const std::uint64_t key = derive_seed(spec.seed, kLabelSalt);
  BitVector bits(spec.m);
  switch (spec.target.kind) {
    case TargetRule::Kind::null_iid:
      for (std::size_t i = 0; i < spec.m; ++i) {
        if (counter_bernoulli(key, 0, i, spec.target.mu)) bits.set(i);
      }
      break;
    case TargetRule::Kind::null_conditional:
      if (spec.target.k > spec.m) throw OracleError("k exceeds m");
      bits = k_subset(spec.m, spec.target.k, key, 0);
      break;
    case TargetRule::Kind::planted: {
      const Dataset unlabeled(features, LabelVector(BitVector(spec.m)));
      for (std::size_t i = 0; i < spec.m; ++i) {
        const double p = spec.target.selector.holds(unlabeled, i) ? spec.target.p_in : spec.target.p_out;
        if (counter_bernoulli(key, 0, i, p)) bits.set(i);
      }
      break;
    }
  }
  return Dataset(std::move(features), LabelVector(std::move(bits)));
}

Dataset mushroom_like(std::uint64_t seed) {
  constexpr std::size_t m = 8124;
  constexpr std::size_t positives = 3916;
  const std::vector<std::size_t> cardinality = {6, 4, 10, 2, 9, 4, 3, 2, 12, 2, 5, 4, 4, 9, 9, 2, 4, 3, 5, 9, 6, 7};
  const std::vector<std::string> names = {
      "cap-shape",  "cap-surface", "cap-color",   "bruises",     "odor",        "gill-attachment",
      "gill-spacing", "gill-size", "gill-color",  "stalk-shape", "stalk-root",  "stalk-surface-above-ring",
      "stalk-surface-below-ring", "stalk-color-above-ring", "stalk-color-below-ring", "veil-type", "veil-color",
      "ring-number", "ring-type", "spore-print-color", "population", "habitat"};

  const std::uint64_t label_key = derive_seed(seed, kLabelSalt);
  const BitVector label_bits = k_subset(m, positives, label_key, 0);

  // Columns whose value distribution shifts with the label; the rest are
  // skewed but label-independent.
  const auto dependence = [](std::size_t column) {
    switch (column) {
      case 4: return 0.85;   // odor
      case 19: return 0.6;   // spore-print-color
      case 7: return 0.5;    // gill-size
      case 3: return 0.4;    // bruises
      case 20: return 0.25;  // population
      default: return 0.0;
    }
  };

  std::vector<FeatureColumn> features;
  for (std::size_t c = 0; c < cardinality.size(); ++c) {
    const std::size_t n = cardinality[c];
    std::vector<double> base(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += base[k] = 1.0 / static_cast<double>(k + 1);
    for (auto& b : base) b /= total;

    // Label 1 moves mass to the first half of the values, label 0 to the second.
    const double shift = dependence(c);
    std::vector<double> pos(n), neg(n);
    const std::size_t half = std::max<std::size_t>(1, n / 2);
    for (std::size_t k = 0; k < n; ++k) {
      const double low = k < half ? 1.0 / static_cast<double>(half) : 0.0;
      const double high = k >= half ? 1.0 / static_cast<double>(n - half) : 0.0;
      pos[k] = (1.0 - shift) * base[k] + shift * low;
      neg[k] = (1.0 - shift) * base[k] + shift * (n > 1 ? high : low);
    }

    const std::uint64_t key = derive_seed(seed, c + 1);
    std::vector<std::int32_t> codes(m);
    for (std::size_t i = 0; i < m; ++i) {
      codes[i] = draw_categorical(label_bits.test(i) ? pos : neg, counter_uniform(key, 0, i));
    }
    features.push_back(FeatureColumn::categorical(names[c], std::move(codes), value_names(n)));
  }
  return Dataset(std::move(features), LabelVector(label_bits), "class");
}

Runner method_runner(RunConfig cfg) {
  cfg.parallel = false;
  return [cfg](const Dataset& d, std::uint64_t seed) {
    RunConfig run = cfg;
    run.seed = seed;
    switch (run.method) {
      case Method::conditional:
      case Method::unconditional: return run_fsr(d, run).discoveries;
      case Method::wy: return run_wy(d, run).discoveries;
      case Method::ub: return run_ub(d, run).discoveries;
    }
    throw OracleError("unknown method");
  };
}

TrialSummary monte_carlo(const SyntheticSpec& spec, const Runner& runner, std::size_t trials, std::uint64_t base_seed,
                         const std::optional<Pattern>& planted, const std::string& method) {
  if (trials < 1) throw OracleError("trials must be >= 1");
  std::vector<std::uint8_t> rejected(trials, 0);
  std::vector<std::uint8_t> hit(trials, 0);
  const auto t_count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < t_count; ++t) {
    const auto ut = static_cast<std::uint64_t>(t);
    SyntheticSpec trial_spec = spec;
    trial_spec.seed = derive_seed(base_seed, 2 * ut);
    const auto found = runner(generate(trial_spec), derive_seed(base_seed, 2 * ut + 1));
    rejected[static_cast<std::size_t>(t)] = found.empty() ? 0 : 1;
    if (planted) {
      hit[static_cast<std::size_t>(t)] =
          std::any_of(found.begin(), found.end(), [&](const Discovery& disc) { return disc.pattern == *planted; });
    }
  }
  TrialSummary s;
  s.method = method;
  s.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    s.rejections += rejected[t];
    s.planted_hits += hit[t];
  }
  s.empirical_fwer = static_cast<double>(s.rejections) / static_cast<double>(trials);
  return s;
}

CouplingSamples coupling_samples(std::size_t m, std::size_t k, const std::vector<BitVector>& family,
                                 std::size_t samples, std::uint64_t seed) {
  if (family.empty()) throw OracleError("coupling family must be non-empty");
  if (k > m || m < 1) throw OracleError("coupling requires 0 <= k <= m, m >= 1");
  for (const auto& cover : family) {
    if (cover.size() != m) throw OracleError("coupling cover length differs from m");
  }
  const double center = static_cast<double>(k) / static_cast<double>(m);
  const auto sup_over = [&](const BitVector& labels) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& cover : family) {
      const std::size_t support = cover.count();
      const std::size_t pos = intersect_count(cover, labels);
      best = std::max(best, quality_from_counts(pos, support, m, center));
    }
    return best;
  };

  CouplingSamples out;
  out.m = m;
  out.k = k;
  out.conditional.resize(samples);
  out.iid.resize(samples);
  const std::uint64_t cond_key = derive_seed(seed, 1);
  const std::uint64_t iid_key = derive_seed(seed, 2);
  const auto s_count = static_cast<std::int64_t>(samples);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < s_count; ++s) {
    const auto us = static_cast<std::uint64_t>(s);
    out.conditional[static_cast<std::size_t>(s)] = sup_over(k_subset(m, k, cond_key, us));
    BitVector iid(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (counter_bernoulli(iid_key, us, i, center)) iid.set(i);
    }
    out.iid[static_cast<std::size_t>(s)] = sup_over(iid);
  }
  return out;
}

std::vector<CouplingPoint> coupling_check(const CouplingSamples& samples, const std::vector<double>& thresholds) {
  const auto tail = [](const std::vector<double>& v, double z) {
    const auto n = std::count_if(v.begin(), v.end(), [z](double x) { return x >= z; });
    return static_cast<double>(n) / static_cast<double>(v.size());
  };
  std::vector<CouplingPoint> out;
  for (const double z : thresholds) {
    CouplingPoint pt;
    pt.z = z;
    pt.p_cond = tail(samples.conditional, z);
    pt.p_iid = tail(samples.iid, z);
    const double nc = static_cast<double>(samples.conditional.size());
    const double ni = static_cast<double>(samples.iid.size());
    pt.slack = 3.0 * std::sqrt(pt.p_cond * (1.0 - pt.p_cond) / nc + 4.0 * pt.p_iid * (1.0 - pt.p_iid) / ni);
    pt.holds = pt.p_cond <= 2.0 * pt.p_iid + pt.slack;
    out.push_back(pt);
  }
  return out;
}

}  // namespace fsr::oracle

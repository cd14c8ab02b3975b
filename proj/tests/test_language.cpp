#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "fsr/language.hpp"
#include "fsr/oracle.hpp"
#include "helpers.hpp"

using namespace fsr;

namespace {

LanguageConfig config(std::size_t z, std::size_t bins = 5, FormSet forms = FormSet::all()) {
  LanguageConfig cfg;
  cfg.max_length = z;
  cfg.bins = bins;
  cfg.forms = forms;
  return cfg;
}

// Full refine-driven enumeration from the root.
void walk(const std::optional<Pattern>& node, const std::vector<Selector>& base, const LanguageConfig& cfg,
          std::vector<Pattern>& out) {
  if (node && node->size() >= cfg.max_length) return;
  for (auto& child : refine(node, base, cfg)) {
    out.push_back(child);
    walk(child, base, cfg, out);
  }
}

Dataset continuous_dataset(std::size_t m, std::size_t columns, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<FeatureColumn> features;
  for (std::size_t c = 0; c < columns; ++c) {
    std::vector<double> v(m);
    for (auto& x : v) x = std::round(u(rng) * 4.0) / 4.0;
    features.push_back(FeatureColumn::continuous("x" + std::to_string(c), std::move(v)));
  }
  return Dataset(std::move(features), test::random_labels(m, 0.5, rng));
}

}  // namespace

TEST_CASE("one equals-selector per observed categorical code") {
  const Dataset d({FeatureColumn::categorical("c", {0, 1, 2, 1}, {"a", "b", "c", "unused"})},
                  LabelVector::from_values({0, 1, 0, 1}));
  const auto base = base_selectors(d, config(1));
  REQUIRE(base.size() == 3);
  for (std::int32_t k = 0; k < 3; ++k) CHECK(base[static_cast<std::size_t>(k)] == Selector::equals(0, k));
}

TEST_CASE("median cut on 1..100 with one bin") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  const Dataset d({FeatureColumn::continuous("x", v)}, LabelVector(BitVector(100)));
  const auto base = base_selectors(d, config(1, 1, {SelectorForm::less_than, SelectorForm::at_least}));
  REQUIRE(base.size() == 2);
  CHECK(base[0] == Selector::less_than(0, 50.5));
  CHECK(base[1] == Selector::at_least(0, 50.5));
}

TEST_CASE("empirical quantile interpolates linearly") {
  CHECK(empirical_quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == 2.5);
  CHECK(empirical_quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.25) == 2.0);
  CHECK(empirical_quantile({7.0}, 0.9) == 7.0);
}

TEST_CASE("cut points are deduplicated") {
  const auto cuts = cut_points({1, 1, 1, 1, 1, 1, 2}, 3);
  CHECK(cuts == std::vector<double>{1.0});
}

TEST_CASE("intervals span every pair of cut points") {
  std::vector<double> v(40);
  std::iota(v.begin(), v.end(), 0.0);
  const Dataset d({FeatureColumn::continuous("x", v)}, LabelVector(BitVector(40)));
  const auto base = base_selectors(d, config(1, 3, {SelectorForm::interval}));
  CHECK(base.size() == 3);  // C(3, 2)
  for (const auto& s : base) CHECK(s.lo < s.hi);
}

TEST_CASE("itemset mode keeps value-1 presence only") {
  const Dataset d({FeatureColumn::categorical("a", {0, 1, 1}, {"0", "1"}),
                   FeatureColumn::categorical("b", {1, 0, 1}, {"1", "0"})},
                  LabelVector::from_values({1, 0, 1}));
  auto cfg = config(2);
  cfg.mode = LanguageMode::itemset;
  const auto base = base_selectors(d, cfg);
  REQUIRE(base.size() == 2);
  CHECK(base[0] == Selector::equals(0, 1));
  CHECK(base[1] == Selector::equals(1, 0));
}

TEST_CASE("itemset mode rejects continuous columns") {
  auto cfg = config(1);
  cfg.mode = LanguageMode::itemset;
  CHECK_THROWS_AS(base_selectors(test::three_rows(), cfg), ConfigError);
}

TEST_CASE("evaluate on the three-row example") {
  const auto d = test::three_rows();
  const Pattern red({Selector::equals(0, 0)});
  CHECK(evaluate(red, d).bits().indices() == std::vector<std::size_t>{0, 2});
  const Pattern red_light({Selector::less_than(1, 1.0), Selector::equals(0, 0)});
  CHECK(evaluate(red_light, d).bits().indices() == std::vector<std::size_t>{2});
  CHECK(evaluate(red_light, d).is_subset_of(evaluate(red, d)));
  CHECK(red_light.render(d) == "color=red AND weight<1.00");
}

TEST_CASE("interval is half-open") {
  const Dataset d({FeatureColumn::continuous("x", {1.0, 2.0, 3.0})}, LabelVector::from_values({0, 0, 1}));
  CHECK(evaluate(Pattern({Selector::interval(0, 1.0, 3.0)}), d).bits().indices() ==
        std::vector<std::size_t>{0, 1});
  CHECK(render(Selector::interval(0, 1.0, 3.0), d) == "x in [1.00, 3.00)");
  CHECK(render(Selector::at_least(0, 0.125), d) == "x>=0.125");
  CHECK_THROWS(Selector::interval(0, 2.0, 2.0));
}

TEST_CASE("patterns are canonical") {
  const Pattern a({Selector::equals(2, 1), Selector::less_than(0, 3.0)});
  const Pattern b({Selector::less_than(0, 3.0), Selector::equals(2, 1)});
  CHECK(a == b);
  CHECK(std::hash<Pattern>{}(a) == std::hash<Pattern>{}(b));
  CHECK(a.selectors().front().column == 0);
  CHECK_THROWS(Pattern({Selector::equals(1, 0), Selector::equals(1, 1)}));
  CHECK_THROWS(Pattern(std::vector<Selector>{}));
}

TEST_CASE("refine counts") {
  const Dataset d({FeatureColumn::categorical("a", {0, 0}, {"x"}), FeatureColumn::categorical("b", {0, 0}, {"x"}),
                   FeatureColumn::categorical("c", {0, 0}, {"x"})},
                  LabelVector::from_values({0, 1}));
  const auto cfg = config(2);
  const auto base = base_selectors(d, cfg);
  const auto roots = refine(std::nullopt, base, cfg);
  REQUIRE(roots.size() == 3);
  CHECK(refine(roots[0], base, cfg).size() == 2);
  CHECK(refine(roots[2], base, cfg).empty());
  CHECK(refine(roots[0], base, config(1)).empty());
}

TEST_CASE("d single-selector columns at z = 2 give d + d(d-1)/2 patterns") {
  for (std::size_t cols = 1; cols <= 6; ++cols) {
    std::vector<FeatureColumn> features;
    for (std::size_t c = 0; c < cols; ++c) features.push_back(FeatureColumn::categorical("c" + std::to_string(c), {0}, {"x"}));
    const Dataset d(std::move(features), LabelVector::from_values({1}));
    const auto cfg = config(2);
    const auto base = base_selectors(d, cfg);
    std::vector<Pattern> all;
    walk(std::nullopt, base, cfg, all);
    CHECK(all.size() == cols + cols * (cols - 1) / 2);
    CHECK(language_size(base, 2) == all.size());
  }
}

TEST_CASE("refine enumeration equals the nested-loop generator") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t cols = 1 + rng() % 4;
    const auto d = trial % 2 ? continuous_dataset(15, cols, rng) : test::random_binary(15, cols, 0.5, rng());
    const auto cfg = config(1 + rng() % 2, 1 + rng() % 3);
    const auto base = base_selectors(d, cfg);
    std::vector<Pattern> walked;
    walk(std::nullopt, base, cfg, walked);
    const auto nested = oracle::enumerate_patterns(d, cfg);
    CHECK(std::set<Pattern>(walked.begin(), walked.end()) == std::set<Pattern>(nested.begin(), nested.end()));
    CHECK(walked.size() == nested.size());
    CHECK(language_size(base, cfg.max_length) == nested.size());
  }
}

TEST_CASE("child covers are subsets of parent covers") {
  std::mt19937_64 rng(3);
  const auto d = continuous_dataset(25, 3, rng);
  const auto cfg = config(3, 2);
  const auto base = base_selectors(d, cfg);
  std::vector<Pattern> all;
  walk(std::nullopt, base, cfg, all);
  for (const auto& p : all) {
    if (p.size() < 2) continue;
    const Pattern parent({p.selectors().begin(), p.selectors().end() - 1});
    CHECK(evaluate(p, d).count() <= evaluate(parent, d).count());
    CHECK(evaluate(p, d).is_subset_of(evaluate(parent, d)));
  }
}

TEST_CASE("duplicate columns collapse to one projection") {
  const Dataset d({FeatureColumn::categorical("a", {0, 1, 0, 1}, {"x", "y"}),
                   FeatureColumn::categorical("b", {0, 1, 0, 1}, {"x", "y"})},
                  LabelVector::from_values({0, 1, 0, 1}));
  CHECK(base_selectors(d, config(1)).size() == 4);
  CHECK(count_distinct_projections(d, config(1)) == 2);
  // z = 2 adds a=x AND b=y (empty) and a=y AND b=x (empty), one projection together
  CHECK(count_distinct_projections(d, config(2)) == 3);
}

TEST_CASE("distinct projections match a brute-force set of covers") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = test::random_binary(8, 3, 0.5, seed);
    const auto cfg = config(2);
    std::unordered_set<BitVector> covers;
    for (const auto& p : oracle::enumerate_patterns(d, cfg)) covers.insert(evaluate(p, d).bits());
    CHECK(count_distinct_projections(d, cfg) == covers.size());
  }
}

TEST_CASE("closed-form projection bound") {
  CHECK(projection_bound_closed_form_log(2, 1, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(projection_bound_closed_form_log(100, 10, 2) == doctest::Approx(22.094379124341004).epsilon(1e-14));
  double prev_m = -1e300;
  double prev_d = -1e300;
  for (std::size_t k = 1; k < 200; k += 7) {
    const double by_m = projection_bound_closed_form_log(k, 4, 2);
    const double by_d = projection_bound_closed_form_log(50, k, 2);
    CHECK(by_m >= prev_m);
    CHECK(by_d >= prev_d);
    prev_m = by_m;
    prev_d = by_d;
  }
}

TEST_CASE("projection count within closed form, pattern count and 2^m on continuous data") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 4 + rng() % 12;
    const std::size_t cols = 1 + rng() % 3;
    const auto d = continuous_dataset(m, cols, rng);
    const auto cfg = config(1 + rng() % 2, 1 + rng() % 3);
    const auto n = static_cast<double>(count_distinct_projections(d, cfg));
    const auto base = base_selectors(d, cfg);
    CHECK(n <= static_cast<double>(language_size(base, cfg.max_length)));
    CHECK(n <= std::ldexp(1.0, static_cast<int>(m)));
    CHECK(std::log(n) <= projection_bound_closed_form_log(m, cols, cfg.max_length) + 1e-12);
  }
}

TEST_CASE("form list parsing") {
  CHECK(FormSet::parse("equals,interval") == FormSet{SelectorForm::equals, SelectorForm::interval});
  CHECK(FormSet::all().to_string() == "equals,less_than,at_least,interval");
  CHECK_THROWS_AS(FormSet::parse("between"), ConfigError);
  CHECK_THROWS_AS(FormSet::parse(""), ConfigError);
}

TEST_CASE("language config validation") {
  auto cfg = config(0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = config(1, 0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

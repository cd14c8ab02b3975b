#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "fsr/baselines.hpp"
#include "fsr/oracle.hpp"
#include "fsr/validation.hpp"
#include "helpers.hpp"

using namespace fsr;

namespace {

RunConfig config(Method method, std::size_t z = 2) {
  RunConfig cfg;
  cfg.method = method;
  cfg.language.max_length = z;
  cfg.permutations = 200;
  return cfg;
}

}  // namespace

TEST_CASE("quantile position is ceil(delta * p)") {
  CHECK(quantile_position(0.05, 1000) == 50);
  CHECK(quantile_position(0.05, 10) == 1);
  CHECK(quantile_position(0.05, 1) == 1);
  CHECK(quantile_position(0.05, 10000) == 500);
  CHECK(quantile_position(0.1, 30) == 3);
  CHECK(quantile_position(0.07, 100) == 7);
  CHECK(quantile_position(0.051, 100) == 6);
  CHECK(quantile_position(0.999, 10) == 10);
}

TEST_CASE("quantile position matches a brute-force sort on random inputs") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t p = 1 + rng() % 300;
    const double delta = std::uniform_real_distribution<double>(0.001, 0.999)(rng);
    std::vector<double> v(p);
    for (auto& x : v) x = u(rng);
    const auto q = make_quantile(v, delta);
    std::sort(v.begin(), v.end(), std::greater<>());
    // smallest 1-based position r with r >= delta * p
    std::size_t r = 1;
    while (static_cast<double>(r) < delta * static_cast<double>(p)) ++r;
    CHECK(q.position == r);
    CHECK(q.delta_quantile == v[r - 1]);
    CHECK(q.deviations == v);
  }
}

TEST_CASE("permutations keep the number of ones and are reproducible") {
  const auto labels = LabelVector::from_values({1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0});
  for (std::size_t j = 0; j < 50; ++j) {
    const auto p = permute_labels(labels, 3, j);
    CHECK(p.ones() == labels.ones());
    CHECK(p == permute_labels(labels, 3, j));
  }
  CHECK_FALSE(permute_labels(labels, 3, 0) == permute_labels(labels, 3, 1));
}

TEST_CASE("permutations are uniform over placements") {
  // m = 4 with 2 ones: 6 placements, each with probability 1/6
  const auto labels = LabelVector::from_values({1, 1, 0, 0});
  std::map<std::vector<std::size_t>, int> counts;
  const int n = 60000;
  for (int j = 0; j < n; ++j) counts[permute_labels(labels, 9, static_cast<std::size_t>(j)).bits().indices()]++;
  CHECK(counts.size() == 6);
  for (const auto& [placement, c] : counts) CHECK(std::abs(c / double(n) - 1.0 / 6.0) < 0.01);
}

TEST_CASE("p = 1: threshold is that permutation's supremum") {
  const auto d = test::random_binary(300, 4, 0.4, 2);
  auto cfg = config(Method::wy);
  cfg.permutations = 1;
  cfg.seed = 5;
  const auto r = run_wy(d, cfg);
  const SelectorIndex index(d, cfg.language);
  CHECK(r.quantile.delta_quantile ==
        sup_quality(index, permute_labels(d.target(), 5, 0), mean_target(d)).supremum);
  CHECK(r.report.epsilon == r.quantile.delta_quantile);
  CHECK(r.report.eps_T == 0.0);
}

TEST_CASE("exhaustive permutation oracle on m = 8") {
  const auto d = test::random_binary(8, 3, 0.5, 11);
  LanguageConfig cfg;
  const std::size_t k = 3;
  const double center = static_cast<double>(k) / 8.0;
  // every placement of k ones among 8 rows
  std::vector<double> exact;
  std::vector<int> mask(8, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  do {
    exact.push_back(oracle::brute_force_sup(d, LabelVector::from_values(mask), center, cfg));
  } while (std::next_permutation(mask.begin(), mask.end()));
  REQUIRE(exact.size() == 56);

  const SelectorIndex index(d, cfg);
  std::vector<double> searched;
  std::fill(mask.begin(), mask.end(), 0);
  std::fill(mask.end() - k, mask.end(), 1);
  do {
    searched.push_back(sup_quality(index, LabelVector::from_values(mask), center).supremum);
  } while (std::next_permutation(mask.begin(), mask.end()));

  for (double delta : {0.01, 0.05, 0.1, 0.25}) {
    std::vector<double> sorted = exact;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto pos = static_cast<std::size_t>(std::ceil(delta * 56.0 - 1e-12));
    CHECK(make_quantile(searched, delta).delta_quantile == sorted[std::max<std::size_t>(pos, 1) - 1]);
  }
}

TEST_CASE("parallel and serial permutation deviations agree") {
  const auto d = test::random_binary(500, 5, 0.3, 3);
  LanguageConfig cfg;
  const SelectorIndex index(d, cfg);
  const PermutationPlan plan{64, 8};
  CHECK(permutation_deviations(index, d.target(), mean_target(d), plan) ==
        serial::permutation_deviations(index, d.target(), mean_target(d), plan));
}

TEST_CASE("WY output is every pattern at or above the quantile") {
  auto spec = validation::planted_spec();
  spec.m = 1500;
  spec.seed = 4;
  const auto d = oracle::generate(spec);
  const auto cfg = config(Method::wy);
  const auto r = run_wy(d, cfg);
  const auto expected =
      oracle::brute_force_above(d, d.target(), mean_target(d), r.quantile.delta_quantile, 0.0, cfg.language);
  REQUIRE(r.discoveries.size() == expected.size());
  CHECK_FALSE(r.discoveries.empty());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(r.discoveries[i].pattern == expected[i].pattern);
}

TEST_CASE("UB with a single projection reduces to the ln N = 0 bound") {
  const Dataset d({FeatureColumn::categorical("a", std::vector<std::int32_t>(50, 0), {"x"})},
                  test::random_binary(50, 1, 0.4, 1).target());
  auto cfg = config(Method::ub, 1);
  const auto r = run_ub(d, cfg);
  REQUIRE(r.report.n_hat_log);
  CHECK(*r.report.n_hat_log == 0.0);
  const auto nu = nu_plugin(r.report.mu_D, r.report.eps_T);
  CHECK(r.report.epsilon == bound_statistic_ub(0.0, nu.nu_T, nu.nu, 50, 0.05).epsilon);
  CHECK(r.report.d_values.empty());
}

TEST_CASE("UB is deterministic and ignores the seed") {
  const auto d = test::random_binary(400, 4, 0.3, 6);
  auto a = config(Method::ub);
  auto b = config(Method::ub);
  b.seed = 12345;
  CHECK(run_ub(d, a).report == run_ub(d, b).report);
}

TEST_CASE("empirical projection count stays below the closed form on continuous data") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 6 + rng() % 20;
    std::vector<FeatureColumn> features;
    const std::size_t cols = 1 + rng() % 3;
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<double> v(m);
      for (auto& x : v) x = static_cast<double>(rng() % 1000) / 10.0;
      features.push_back(FeatureColumn::continuous("x" + std::to_string(c), std::move(v)));
    }
    const Dataset d(std::move(features), test::random_labels(m, 0.5, rng));
    LanguageConfig cfg;
    cfg.max_length = 1 + rng() % 2;
    CHECK(projection_count_log(d, cfg, ProjectionSource::empirical) <=
          projection_count_log(d, cfg, ProjectionSource::closed_form) + 1e-12);
  }
}

TEST_CASE("UB threshold grows with the projection count") {
  auto spec = validation::planted_spec();
  spec.seed = 10;
  const auto d = oracle::generate(spec);
  auto empirical = config(Method::ub);
  auto closed = empirical;
  closed.n_hat_source = ProjectionSource::closed_form;
  const auto a = run_ub(d, empirical);
  const auto b = run_ub(d, closed);
  CHECK(*a.report.n_hat_log < *b.report.n_hat_log);
  CHECK(a.report.epsilon < b.report.epsilon);
  CHECK(b.discoveries.size() <= a.discoveries.size());
}

#include <doctest.h>

#include <numeric>

#include "fsr/oracle.hpp"
#include "fsr/validation.hpp"
#include "helpers.hpp"

using namespace fsr;

namespace {

oracle::SyntheticSpec binary_spec(std::size_t m, oracle::TargetRule rule, std::uint64_t seed) {
  oracle::SyntheticSpec spec;
  spec.m = m;
  for (int c = 0; c < 3; ++c) spec.columns.push_back(oracle::ColumnGen::categorical("b" + std::to_string(c), {0.5, 0.5}));
  spec.target = rule;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("i.i.d. null hits its rate") {
  const auto d = oracle::generate(binary_spec(10000, oracle::TargetRule::null_iid(0.3), 1));
  CHECK(d.m() == 10000);
  CHECK(d.feature_count() == 3);
  CHECK(d.target().mean() >= 0.27);
  CHECK(d.target().mean() <= 0.33);
}

TEST_CASE("conditional null has exactly k ones") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(oracle::generate(binary_spec(1000, oracle::TargetRule::null_conditional(300), seed)).target().ones() == 300);
  }
  CHECK_THROWS_AS(oracle::generate(binary_spec(10, oracle::TargetRule::null_conditional(11), 0)), oracle::OracleError);
}

TEST_CASE("planted rule: label rate on the cover and off it") {
  auto spec = validation::planted_spec();
  spec.seed = 3;
  const auto d = oracle::generate(spec);
  const auto cover = evaluate(validation::planted_pattern(), d);
  std::size_t in = 0, in_pos = 0, out_pos = 0;
  for (std::size_t i = 0; i < d.m(); ++i) {
    if (cover.contains(i)) {
      ++in;
      in_pos += d.target()[i] ? 1 : 0;
    } else {
      out_pos += d.target()[i] ? 1 : 0;
    }
  }
  CHECK(std::abs(static_cast<double>(in) / 5000.0 - 0.2) < 0.03);
  CHECK(std::abs(static_cast<double>(in_pos) / static_cast<double>(in) - 0.9) < 0.03);
  CHECK(std::abs(static_cast<double>(out_pos) / static_cast<double>(5000 - in) - 0.1) < 0.02);
}

TEST_CASE("generation is reproducible and seed-sensitive") {
  const auto spec = validation::ordering_spec(9);
  const auto a = oracle::generate(spec);
  const auto b = oracle::generate(spec);
  CHECK(a.target() == b.target());
  CHECK(a.feature(3).codes == b.feature(3).codes);
  CHECK_FALSE(a.target() == oracle::generate(validation::ordering_spec(10)).target());
}

TEST_CASE("continuous generators") {
  oracle::SyntheticSpec spec;
  spec.m = 5000;
  spec.columns = {oracle::ColumnGen::uniform("u", 2.0, 3.0), oracle::ColumnGen::normal("n", -1.0, 0.5)};
  spec.target = oracle::TargetRule::null_iid(0.5);
  const auto d = oracle::generate(spec);
  const auto& u = d.feature(0).values;
  CHECK(*std::min_element(u.begin(), u.end()) >= 2.0);
  CHECK(*std::max_element(u.begin(), u.end()) < 3.0);
  const auto& n = d.feature(1).values;
  CHECK(std::accumulate(n.begin(), n.end(), 0.0) / 5000.0 == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("mushroom-like table") {
  const auto d = oracle::mushroom_like(1);
  CHECK(d.m() == 8124);
  CHECK(d.feature_count() == 22);
  CHECK(d.target().ones() == 3916);
  for (const auto& f : d.features()) CHECK(f.is_categorical());
}

TEST_CASE("enumeration guard") {
  const auto d = test::random_binary(4, 30, 0.5, 1);
  LanguageConfig cfg;
  cfg.max_length = 6;
  CHECK_THROWS_AS(oracle::enumerate_patterns(d, cfg), oracle::OracleError);
}

TEST_CASE("row_quality matches the cover-based computation") {
  const auto d = test::random_binary(40, 3, 0.5, 4);
  LanguageConfig cfg;
  for (const auto& p : oracle::enumerate_patterns(d, cfg)) {
    CHECK(oracle::row_quality(p, d, d.target(), 0.37) == empirical_quality(evaluate(p, d), d.target(), 0.37));
  }
}

TEST_CASE("one trial: FWER is 0 or 1") {
  const auto spec = validation::fwer_spec(TestingMode::conditional);
  const auto s = oracle::monte_carlo(spec, oracle::method_runner(validation::suite_config(Method::conditional, 1)),
                                     1, 5, std::nullopt, "fsr-c");
  CHECK(s.trials == 1);
  CHECK((s.empirical_fwer == 0.0 || s.empirical_fwer == 1.0));
}

TEST_CASE("a runner that always rejects gives FWER 1; planted hits are counted") {
  const auto spec = validation::fwer_spec(TestingMode::unconditional);
  const oracle::Runner always = [](const Dataset&, std::uint64_t) {
    return std::vector<Discovery>{{validation::planted_pattern(), 0.1, 0.2, 0.0}};
  };
  const auto s = oracle::monte_carlo(spec, always, 4, 0, validation::planted_pattern());
  CHECK(s.rejections == 4);
  CHECK(s.empirical_fwer == 1.0);
  CHECK(s.planted_hits == 4);
}

TEST_CASE("Monte-Carlo runs are reproducible") {
  const auto spec = validation::fwer_spec(TestingMode::conditional);
  const auto runner = oracle::method_runner(validation::suite_config(Method::conditional, 1));
  CHECK(oracle::monte_carlo(spec, runner, 6, 3) == oracle::monte_carlo(spec, runner, 6, 3));
}

TEST_CASE("coupling: thresholds below every supremum give probability 1 on both sides") {
  std::vector<BitVector> family(2, BitVector(10));
  for (std::size_t i = 0; i < 10; ++i) family[0].set(i);
  family[1].set(0);
  const auto s = oracle::coupling_samples(10, 5, family, 500, 1);
  CHECK(s.conditional.size() == 500);
  for (double v : s.conditional) CHECK(v >= 0.0);
  const auto pts = oracle::coupling_check(s, {-1.0});
  CHECK(pts[0].p_cond == 1.0);
  CHECK(pts[0].p_iid == 1.0);
  CHECK(pts[0].holds);
}

TEST_CASE("band helper") {
  CHECK(validation::fwer_band(0.05, 200) == doctest::Approx(0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 200.0)));
}

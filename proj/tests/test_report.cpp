#include <doctest.h>

#include <sstream>

#include "fsr/oracle.hpp"
#include "fsr/report.hpp"
#include "fsr/validation.hpp"

using namespace fsr;

namespace {

Dataset planted(std::uint64_t seed) {
  auto spec = validation::planted_spec();
  spec.m = 2000;
  spec.seed = seed;
  return oracle::generate(spec);
}

RunConfig config(Method method) {
  RunConfig cfg;
  cfg.method = method;
  cfg.permutations = 100;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 0.1, 1.0 / 3.0, -2.5e-17, 0.02229048831558531}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("TSV and JSON carry identical values") {
  const auto d = planted(1);
  for (auto method : {Method::conditional, Method::unconditional, Method::wy, Method::ub}) {
    const auto outcome = run_method(d, config(method));
    REQUIRE_FALSE(outcome.records.empty());
    std::stringstream tsv;
    write_tsv(tsv, outcome);
    const auto rows = read_tsv_records(tsv);
    std::stringstream js;
    write_json(js, outcome);
    const auto j = nlohmann::json::parse(js.str());
    const auto from_json = j.at("records").get<std::vector<OutputRecord>>();
    CHECK(rows == outcome.records);
    CHECK(from_json == outcome.records);
    CHECK(j.at("significant_count").get<std::size_t>() == outcome.significant_count);
    CHECK(j.at("bound_report").get<BoundReport>() == outcome.report);
    CHECK(j.at("quantile").is_null() == (method != Method::wy));
  }
}

TEST_CASE("TSV footer lists the report") {
  const auto outcome = run_method(planted(2), config(Method::unconditional));
  std::ostringstream os;
  write_tsv(os, outcome);
  const auto text = os.str();
  CHECK(text.rfind("rank\tpattern\tquality\tfrequency\tthreshold_margin\tsignificant\n", 0) == 0);
  for (const char* key : {"# method=fsr-u", "# eps_T=", "# d_hat=", "# nu=", "# epsilon=", "# d_values="}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("top-k records carry flags") {
  auto cfg = config(Method::conditional);
  cfg.top_k = 25;
  const auto outcome = run_method(planted(3), cfg);
  CHECK(outcome.records.size() == 25);
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < outcome.records.size(); ++i) {
    CHECK(outcome.records[i].rank == i + 1);
    flagged += outcome.records[i].significant ? 1 : 0;
    CHECK(outcome.records[i].significant == (outcome.records[i].threshold_margin >= 0.0));
  }
  CHECK(flagged == std::min<std::size_t>(25, outcome.significant_count));
}

TEST_CASE("BoundReport and TrialSummary JSON round-trip") {
  const auto outcome = run_method(planted(4), config(Method::ub));
  const nlohmann::json j = outcome.report;
  CHECK(j.get<BoundReport>() == outcome.report);
  CHECK(j.at("omega").is_null());
  const TrialSummary s{"fsr-c", 200, 7, 0.035, 0};
  const nlohmann::json js = s;
  CHECK(js.get<TrialSummary>() == s);
}

TEST_CASE("config hash follows the semantic fields only") {
  const auto base = config(Method::conditional);
  const auto h = config_hash(base);
  auto same = base;
  same.parallel = !same.parallel;
  CHECK(config_hash(same) == h);
  std::vector<RunConfig> changed(7, base);
  changed[0].method = Method::unconditional;
  changed[1].delta = 0.1;
  changed[2].resamples = 11;
  changed[3].seed = 4;
  changed[4].language.max_length = 3;
  changed[5].language.bins = 6;
  changed[6].permutations = 101;
  for (const auto& c : changed) CHECK(config_hash(c) != h);
}

TEST_CASE("sweep is deterministic and its addend scales as 1/sqrt(c)") {
  const auto d = planted(5);
  auto cfg = config(Method::conditional);
  cfg.parallel = false;
  const auto a = sweep_c(d, cfg, {1, 4, 100}, {TestingMode::conditional, TestingMode::unconditional}, "planted");
  auto par = cfg;
  par.parallel = true;
  const auto b = sweep_c(d, par, {1, 4, 100}, {TestingMode::conditional, TestingMode::unconditional}, "planted");
  REQUIRE(a.cells.size() == 6);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].epsilon == b.cells[i].epsilon);
    CHECK(a.cells[i].d_tilde == b.cells[i].d_tilde);
  }
  CHECK(a.cell(1, TestingMode::conditional).addend / a.cell(100, TestingMode::conditional).addend ==
        doctest::Approx(10.0).epsilon(1e-14));
  CHECK(a.cell(1, TestingMode::conditional).addend / a.cell(4, TestingMode::conditional).addend ==
        doctest::Approx(2.0).epsilon(1e-14));
  const auto j = sweep_json(a);
  CHECK(j.at("dataset") == "planted");
  CHECK(j.at("cells").size() == 6);
  CHECK_THROWS(a.cell(7, TestingMode::conditional));
}

TEST_CASE("compare with one method gives a one-row table") {
  const auto d = planted(6);
  const auto rows = compare_methods(d, config(Method::conditional), {Method::ub});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].method == Method::ub);
  CHECK(rows[0].threshold == run_method(d, config(Method::ub)).report.epsilon);
  std::ostringstream os;
  write_comparison_tsv(os, rows);
  std::size_t lines = 0;
  for (char c : os.str()) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 2);
}

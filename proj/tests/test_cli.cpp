#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "fsr/data.hpp"
#include "fsr/oracle.hpp"
#include "fsr/validation.hpp"

using namespace fsr;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Written once per process into the test's working directory.
const std::string& planted_csv() {
  static const std::string path = [] {
    auto spec = validation::planted_spec();
    spec.m = 1500;
    spec.seed = 2;
    write_csv(oracle::generate(spec), "cli_planted.csv");
    return std::string("cli_planted.csv");
  }();
  return path;
}

const std::string& null_csv() {
  static const std::string path = [] {
    auto spec = validation::fwer_spec(TestingMode::conditional);
    spec.seed = 3;
    write_csv(oracle::generate(spec), "cli_null.csv");
    return std::string("cli_null.csv");
  }();
  return path;
}

}  // namespace

TEST_CASE("bad delta exits 2 and names the flag") {
  for (const char* bad : {"1.5", "0", "abc"}) {
    const auto r = run({"mine", "--input", planted_csv(), "--delta", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("--delta") != std::string::npos);
  }
}

TEST_CASE("other configuration errors exit 2") {
  CHECK(run({"mine", "--input", planted_csv(), "--forms", "equals,bogus"}).code == 2);
  CHECK(run({"mine", "--input", planted_csv(), "--mode", "bonferroni"}).code == 2);
  CHECK(run({"mine", "--input", "does_not_exist.csv"}).code == 2);
  CHECK(run({"mine"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("malformed CSV exits 3 and names the line") {
  {
    std::ofstream f("cli_bad.csv");
    f << "a,b,y\nx,1,1\ny,2\n";
  }
  const auto r = run({"mine", "--input", "cli_bad.csv"});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 3") != std::string::npos);
  {
    std::ofstream f("cli_badlabel.csv");
    f << "a,y\nx,1\ny,2\n";
  }
  CHECK(run({"mine", "--input", "cli_badlabel.csv"}).code == 3);
}

TEST_CASE("same seed, byte-identical output") {
  for (const char* mode : {"conditional", "unconditional", "wy", "ub"}) {
    const std::vector<std::string> args = {"mine", "--input", planted_csv(), "--mode", mode, "--seed", "11",
                                           "--permutations", "100"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# method=") != std::string::npos);
  }
}

TEST_CASE("WY reports the quantile position") {
  const auto r = run({"mine", "--input", planted_csv(), "--mode", "wy", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("quantile").at("position") == 50);
  CHECK(j.at("quantile").at("permutations") == 1000);
  CHECK(j.at("method") == "wy");
}

TEST_CASE("JSON output parses and is consistent") {
  const auto r = run({"mine", "--input", planted_csv(), "--mode", "unconditional", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& report = j.at("bound_report");
  CHECK(report.at("eps_T").get<double>() > 0.0);
  CHECK(j.at("records").size() == j.at("significant_count").get<std::size_t>());
  for (const auto& rec : j.at("records")) {
    CHECK(rec.at("quality").get<double>() >=
          report.at("epsilon").get<double>() + report.at("eps_T").get<double>() * rec.at("frequency").get<double>());
  }
}

TEST_CASE("conditional mode on a null dataset") {
  const auto r = run({"mine", "--input", null_csv(), "--mode", "conditional", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("bound_report").at("eps_T") == 0.0);
  CHECK(j.at("bound_report").at("mode") == "conditional");
}

TEST_CASE("top-k and output file") {
  const auto r = run({"mine", "--input", planted_csv(), "--top-k", "5", "--output", "cli_top.tsv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f("cli_top.tsv");
  const auto rows = read_tsv_records(f);
  CHECK(rows.size() == 5);
}

TEST_CASE("validate --suite oracle exits 0") {
  const auto r = run({"validate", "--suite", "oracle", "--instances", "30"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 mismatches") != std::string::npos);
}

TEST_CASE("sweep, compare and generate") {
  const auto s = run({"sweep", "--input", planted_csv(), "--c-values", "1,10", "--format", "json"});
  REQUIRE(s.code == 0);
  CHECK(nlohmann::json::parse(s.out).at("cells").size() == 4);
  const auto c = run({"compare", "--input", planted_csv(), "--methods", "conditional,ub"});
  REQUIRE(c.code == 0);
  const auto g = run({"generate", "--kind", "planted", "--seed", "1", "--output", "cli_gen.csv"});
  REQUIRE(g.code == 0);
  CHECK(load_csv("cli_gen.csv").m() == 5000);
  CHECK(run({"generate", "--kind", "unknown"}).code == 2);
}

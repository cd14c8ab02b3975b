#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "fsr/baselines.hpp"
#include "fsr/data.hpp"
#include "fsr/fsr.hpp"
#include "fsr/oracle.hpp"
#include "fsr/report.hpp"
#include "fsr/validation.hpp"

namespace fsr::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Flags shared by every subcommand that reads a dataset and mines it.
struct CommonArgs {
  std::string input;
  std::string schema = "infer";
  std::string target;
  double delta = 0.05;
  std::size_t resamples = 10;
  std::size_t permutations = 1000;
  std::size_t depth = 2;
  std::size_t bins = 5;
  std::string forms = FormSet::all().to_string();
  std::string language = "subgroup";
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string n_hat = "empirical";
  std::string output;
  std::string format = "tsv";
};

const auto kOpenUnit = CLI::Validator(
    [](const std::string& text) -> std::string {
      try {
        const double v = std::stod(text);
        if (v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "must lie in (0, 1), got " + text;
    },
    "(0,1)");

const auto kFormList = CLI::Validator(
    [](const std::string& text) -> std::string {
      try {
        FormSet::parse(text);
        return {};
      } catch (const ConfigError& e) {
        return e.what();
      }
    },
    "FORMS");

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--input", a.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  app->add_option("--schema", a.schema, "schema file of name=kind lines, or 'infer'");
  app->add_option("--target", a.target, "target column name (default: last column)");
  app->add_option("--delta", a.delta, "FWER level")->check(kOpenUnit)->capture_default_str();
  app->add_option("--resamples", a.resamples, "resamples c")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--permutations", a.permutations, "WY permutations p")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--depth", a.depth, "maximum pattern length z")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--bins", a.bins, "cut points per continuous column")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--forms", a.forms, "comma list of equals,less_than,at_least,interval")
      ->check(kFormList)
      ->capture_default_str();
  app->add_option("--language", a.language, "subgroup or itemset")
      ->check(CLI::IsMember({"subgroup", "itemset"}))
      ->capture_default_str();
  app->add_option("--seed", a.seed, "random seed")->capture_default_str();
  app->add_option("--threads", a.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  app->add_option("--n-hat", a.n_hat, "projection count for ub: empirical or closed-form")
      ->check(CLI::IsMember({"empirical", "closed-form"}))
      ->capture_default_str();
  app->add_option("--output", a.output, "output file (default: standard output)");
  app->add_option("--format", a.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
}

RunConfig make_config(const CommonArgs& a) {
  RunConfig cfg;
  cfg.delta = a.delta;
  cfg.resamples = a.resamples;
  cfg.permutations = a.permutations;
  cfg.seed = a.seed;
  cfg.language.max_length = a.depth;
  cfg.language.bins = a.bins;
  cfg.language.forms = FormSet::parse(a.forms);
  cfg.language.mode = a.language == "itemset" ? LanguageMode::itemset : LanguageMode::subgroup;
  cfg.n_hat_source = a.n_hat == "closed-form" ? ProjectionSource::closed_form : ProjectionSource::empirical;
  return cfg;
}

Dataset load(const CommonArgs& a, std::ostream& err) {
  LoadOptions options;
  if (a.schema != "infer") options.schema = read_schema_file(a.schema);
  if (!a.target.empty()) options.target = a.target;
  const auto start = Clock::now();
  auto d = load_csv(a.input, options);
  err << "[fsr] loaded " << d.m() << " rows x " << d.feature_count() << " features in " << std::fixed
      << std::setprecision(3) << seconds_since(start) << " s\n";
  return d;
}

void apply_threads(std::size_t threads) {
  if (threads > 0) omp_set_num_threads(static_cast<int>(threads));
}

// Runs `write` against the --output file, or `out` when none was given.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("--output: cannot open '" + path + "' for writing");
  write(file);
}

int cmd_mine(const CommonArgs& a, const std::string& mode, std::optional<std::size_t> top_k, std::ostream& out,
             std::ostream& err) {
  apply_threads(a.threads);
  auto cfg = make_config(a);
  cfg.method = parse_method(mode);
  cfg.top_k = top_k;
  const auto d = load(a, err);
  const auto outcome = run_method(d, cfg);
  err << "[fsr] " << method_label(cfg.method) << ": bound phase " << std::fixed << std::setprecision(3)
      << outcome.bound_seconds << " s, search " << outcome.search_seconds << " s, |O| = " << outcome.significant_count
      << '\n';
  emit(a.output, out, [&](std::ostream& os) {
    if (a.format == "json") {
      write_json(os, outcome);
    } else {
      write_tsv(os, outcome);
    }
  });
  return kSuccess;
}

int cmd_sweep(const CommonArgs& a, const std::vector<std::size_t>& c_values, std::ostream& out, std::ostream& err) {
  apply_threads(a.threads);
  const auto cfg = make_config(a);
  const auto d = load(a, err);
  const auto sweep = sweep_c(d, cfg, c_values, {TestingMode::conditional, TestingMode::unconditional}, a.input);
  double total = 0.0;
  for (const auto& c : sweep.cells) total += c.seconds;
  err << "[fsr] sweep of " << sweep.cells.size() << " cells in " << std::fixed << std::setprecision(3) << total
      << " s\n";
  emit(a.output, out, [&](std::ostream& os) {
    if (a.format == "json") {
      os << sweep_json(sweep).dump(2) << '\n';
    } else {
      write_sweep_tsv(os, sweep);
    }
  });
  return kSuccess;
}

int cmd_compare(const CommonArgs& a, const std::vector<std::string>& methods, std::ostream& out, std::ostream& err) {
  apply_threads(a.threads);
  const auto cfg = make_config(a);
  std::vector<Method> parsed;
  for (const auto& m : methods) parsed.push_back(parse_method(m));
  const auto d = load(a, err);
  const auto rows = compare_methods(d, cfg, parsed);
  for (const auto& r : rows) {
    err << "[fsr] " << method_label(r.method) << ": bound phase " << std::fixed << std::setprecision(3)
        << r.bound_seconds << " s\n";
  }
  emit(a.output, out, [&](std::ostream& os) {
    if (a.format == "json") {
      os << comparison_json(rows).dump(2) << '\n';
    } else {
      write_comparison_tsv(os, rows);
    }
  });
  return kSuccess;
}

struct ValidateArgs {
  std::string suite;
  std::size_t trials = 200;
  std::size_t instances = 200;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::vector<std::string> modes = {"conditional", "unconditional"};
  std::size_t threads = 0;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  apply_threads(a.threads);
  std::vector<validation::SuiteResult> results;
  const auto start = Clock::now();
  if (a.suite == "oracle") {
    results.push_back(validation::oracle_suite(a.instances, a.seed));
  } else if (a.suite == "coupling") {
    results.push_back(validation::coupling_suite(a.samples, a.seed));
  } else {
    for (const auto& mode : a.modes) {
      const auto method = parse_method(mode);
      if (a.suite == "fwer") {
        results.push_back(validation::fwer_suite(method, a.trials, a.seed));
      } else {
        const double required = testing_mode(method) == TestingMode::conditional ? 0.95 : 0.80;
        results.push_back(validation::power_suite(method, a.trials, a.seed, required));
      }
    }
  }
  err << "[fsr] suite " << a.suite << " finished in " << std::fixed << std::setprecision(3) << seconds_since(start)
      << " s\n";
  bool pass = true;
  for (const auto& r : results) {
    for (const auto& line : r.lines) out << line << '\n';
    nlohmann::json j = {{"suite", r.name}, {"pass", r.pass}, {"details", r.details}};
    out << j.dump() << '\n';
    pass = pass && r.pass;
  }
  return pass ? kSuccess : kBandViolation;
}

int cmd_generate(const std::string& kind, std::uint64_t seed, const std::string& output, std::ostream& out) {
  Dataset d = [&] {
    if (kind == "mushroom") return oracle::mushroom_like(seed);
    oracle::SyntheticSpec spec;
    if (kind == "ordering") {
      spec = validation::ordering_spec(seed);
    } else if (kind == "planted") {
      spec = validation::planted_spec();
    } else if (kind == "fwer-conditional") {
      spec = validation::fwer_spec(TestingMode::conditional);
    } else {
      spec = validation::fwer_spec(TestingMode::unconditional);
    }
    spec.seed = seed;
    return oracle::generate(spec);
  }();
  emit(output, out, [&](std::ostream& os) { write_csv(d, os); });
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Significant pattern mining with FWER control"};
  app.require_subcommand(1);

  CommonArgs mine_args;
  std::string mode = "conditional";
  std::optional<std::size_t> top_k;
  auto* mine = app.add_subcommand("mine", "mine significant patterns");
  add_common(mine, mine_args);
  mine->add_option("--mode", mode, "conditional, unconditional, wy or ub")
      ->check(CLI::IsMember({"conditional", "unconditional", "wy", "ub"}))
      ->capture_default_str();
  mine->add_option("--top-k", top_k, "report the k best patterns, each flagged")->check(CLI::PositiveNumber);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "run a validation harness");
  validate->add_option("--suite", validate_args.suite, "fwer, power, coupling or oracle")
      ->required()
      ->check(CLI::IsMember({"fwer", "power", "coupling", "oracle"}));
  validate->add_option("--trials", validate_args.trials, "Monte-Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--instances", validate_args.instances, "random instances for the oracle suite")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--samples", validate_args.samples, "samples per distribution for the coupling suite")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--seed", validate_args.seed, "base seed")->capture_default_str();
  validate->add_option("--mode", validate_args.modes, "methods for the fwer and power suites")
      ->check(CLI::IsMember({"conditional", "unconditional", "wy", "ub"}))
      ->delimiter(',');
  validate->add_option("--threads", validate_args.threads, "worker threads")->check(CLI::PositiveNumber);

  CommonArgs sweep_args;
  std::vector<std::size_t> c_values = {1, 2, 5, 10, 20, 50};
  auto* sweep = app.add_subcommand("sweep", "bound statistic as a function of the number of resamples");
  add_common(sweep, sweep_args);
  sweep->add_option("--c-values", c_values, "comma list of resample counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  CommonArgs compare_args;
  std::vector<std::string> methods = {"conditional", "unconditional", "wy", "ub"};
  auto* compare = app.add_subcommand("compare", "thresholds, output sizes and bound-phase times per method");
  add_common(compare, compare_args);
  compare->add_option("--methods", methods, "comma list of methods")
      ->delimiter(',')
      ->check(CLI::IsMember({"conditional", "unconditional", "wy", "ub"}));

  std::string kind = "mushroom";
  std::uint64_t gen_seed = 0;
  std::string gen_output;
  auto* generate = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  generate->add_option("--kind", kind, "mushroom, ordering, planted, fwer-conditional or fwer-unconditional")
      ->check(CLI::IsMember({"mushroom", "ordering", "planted", "fwer-conditional", "fwer-unconditional"}))
      ->capture_default_str();
  generate->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  generate->add_option("--output", gen_output, "output CSV (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*mine) return cmd_mine(mine_args, mode, top_k, out, err);
    if (*validate) return cmd_validate(validate_args, out, err);
    if (*sweep) return cmd_sweep(sweep_args, c_values, out, err);
    if (*compare) return cmd_compare(compare_args, methods, out, err);
    if (*generate) return cmd_generate(kind, gen_seed, gen_output, out);
  } catch (const IngestionError& e) {
    err << "ingestion error: " << e.what() << '\n';
    return kIngestionError;
  } catch (const SchemaError& e) {
    err << "ingestion error: " << e.what() << '\n';
    return kIngestionError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BoundError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const oracle::OracleError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace fsr::cli

#include "fsr/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fsr {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

TestingMode parse_mode(const std::string& text) {
  if (text == "conditional") return TestingMode::conditional;
  if (text == "unconditional") return TestingMode::unconditional;
  throw std::invalid_argument("unknown testing mode '" + text + "'");
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

class Fnv1a {
 public:
  void add(std::string_view text) {
    for (unsigned char ch : text) {
      hash_ ^= ch;
      hash_ *= 0x100000001b3ULL;
    }
    hash_ ^= 0xff;  // field separator
    hash_ *= 0x100000001b3ULL;
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf, ptr);
}

std::vector<OutputRecord> to_records(const std::vector<Discovery>& discoveries, const Dataset& d) {
  std::vector<OutputRecord> out;
  out.reserve(discoveries.size());
  for (const auto& disc : discoveries) {
    out.push_back({out.size() + 1, disc.pattern.render(d), disc.quality, disc.frequency, disc.threshold_margin, true});
  }
  return out;
}

MethodOutcome run_method(const SelectorIndex& index, const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  MethodOutcome out;
  out.method = cfg.method;

  const auto bound_start = Clock::now();
  switch (cfg.method) {
    case Method::conditional:
    case Method::unconditional:
      out.report = fsr_bounds(index, d, testing_mode(cfg.method), cfg);
      break;
    case Method::wy: {
      auto wy = wy_bounds(index, d, cfg);
      out.report = std::move(wy.report);
      out.quantile = std::move(wy.quantile);
      break;
    }
    case Method::ub:
      out.report = ub_bounds(index, d, cfg);
      break;
  }
  out.bound_seconds = seconds_since(bound_start);

  const auto search_start = Clock::now();
  const auto discoveries = significant_patterns(index, d, out.report, cfg.parallel);
  out.significant_count = discoveries.size();
  if (cfg.top_k) {
    const auto flagged = flag_top_k(index, d, out.report, *cfg.top_k, cfg.parallel);
    for (std::size_t i = 0; i < flagged.top.entries.size(); ++i) {
      const auto& e = flagged.top.entries[i];
      out.records.push_back({i + 1, e.pattern.render(d), e.stat.value, e.stat.frequency, flagged.margins[i],
                             flagged.significant[i]});
    }
  } else {
    out.records = to_records(discoveries, d);
  }
  out.search_seconds = seconds_since(search_start);
  return out;
}

MethodOutcome run_method(const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  return run_method(SelectorIndex(d, cfg.language), d, cfg);
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{
      {"method", r.method},
      {"mode", to_string(r.mode)},
      {"delta", r.delta},
      {"m", r.m},
      {"c", r.c},
      {"mu_D", r.mu_D},
      {"mu_hat", r.mu_hat},
      {"mu_check", r.mu_check},
      {"eps_T", r.eps_T},
      {"d_tilde", r.d_tilde},
      {"d_values", r.d_values},
      {"omega", optional_json(r.omega)},
      {"nu", optional_json(r.nu)},
      {"nu_T", optional_json(r.nu_T)},
      {"r_hat", optional_json(r.r_hat)},
      {"d_hat", optional_json(r.d_hat)},
      {"n_hat_log", optional_json(r.n_hat_log)},
      {"nu_source", r.nu_source},
      {"epsilon", r.epsilon},
      {"sup_freq", r.sup_freq},
  };
}

void from_json(const nlohmann::json& j, BoundReport& r) {
  r.method = j.at("method").get<std::string>();
  r.mode = parse_mode(j.at("mode").get<std::string>());
  r.delta = j.at("delta").get<double>();
  r.m = j.at("m").get<std::size_t>();
  r.c = j.at("c").get<std::size_t>();
  r.mu_D = j.at("mu_D").get<double>();
  r.mu_hat = j.at("mu_hat").get<double>();
  r.mu_check = j.at("mu_check").get<double>();
  r.eps_T = j.at("eps_T").get<double>();
  r.d_tilde = j.at("d_tilde").get<double>();
  r.d_values = j.at("d_values").get<std::vector<double>>();
  r.omega = optional_from<double>(j, "omega");
  r.nu = optional_from<double>(j, "nu");
  r.nu_T = optional_from<double>(j, "nu_T");
  r.r_hat = optional_from<double>(j, "r_hat");
  r.d_hat = optional_from<double>(j, "d_hat");
  r.n_hat_log = optional_from<double>(j, "n_hat_log");
  r.nu_source = j.at("nu_source").get<std::string>();
  r.epsilon = j.at("epsilon").get<double>();
  r.sup_freq = j.at("sup_freq").get<double>();
}

void to_json(nlohmann::json& j, const OutputRecord& r) {
  j = nlohmann::json{{"rank", r.rank},
                     {"pattern", r.pattern},
                     {"quality", r.quality},
                     {"frequency", r.frequency},
                     {"threshold_margin", r.threshold_margin},
                     {"significant", r.significant}};
}

void from_json(const nlohmann::json& j, OutputRecord& r) {
  r.rank = j.at("rank").get<std::size_t>();
  r.pattern = j.at("pattern").get<std::string>();
  r.quality = j.at("quality").get<double>();
  r.frequency = j.at("frequency").get<double>();
  r.threshold_margin = j.at("threshold_margin").get<double>();
  r.significant = j.at("significant").get<bool>();
}

void to_json(nlohmann::json& j, const QuantileEstimate& q) {
  j = nlohmann::json{{"permutations", q.deviations.size()},
                     {"position", q.position},
                     {"delta_quantile", q.delta_quantile},
                     {"deviations", q.deviations}};
}

void write_tsv(std::ostream& out, const MethodOutcome& outcome) {
  out << "rank\tpattern\tquality\tfrequency\tthreshold_margin\tsignificant\n";
  for (const auto& r : outcome.records) {
    out << r.rank << '\t' << r.pattern << '\t' << format_double(r.quality) << '\t' << format_double(r.frequency)
        << '\t' << format_double(r.threshold_margin) << '\t' << (r.significant ? "true" : "false") << '\n';
  }
  const auto& b = outcome.report;
  const auto kv = [&](const char* key, const std::string& value) { out << "# " << key << '=' << value << '\n'; };
  const auto kv_opt = [&](const char* key, const std::optional<double>& v) {
    if (v) kv(key, format_double(*v));
  };
  kv("method", b.method);
  kv("mode", to_string(b.mode));
  kv("delta", format_double(b.delta));
  kv("m", std::to_string(b.m));
  kv("c", std::to_string(b.c));
  kv("mu_D", format_double(b.mu_D));
  kv("mu_hat", format_double(b.mu_hat));
  kv("mu_check", format_double(b.mu_check));
  kv("eps_T", format_double(b.eps_T));
  kv("d_tilde", format_double(b.d_tilde));
  if (!outcome.quantile) {
    std::string list;
    for (std::size_t i = 0; i < b.d_values.size(); ++i) {
      if (i) list += ',';
      list += format_double(b.d_values[i]);
    }
    kv("d_values", list);
  }
  kv_opt("omega", b.omega);
  kv_opt("nu", b.nu);
  kv_opt("nu_T", b.nu_T);
  kv_opt("r_hat", b.r_hat);
  kv_opt("d_hat", b.d_hat);
  kv_opt("n_hat_log", b.n_hat_log);
  if (!b.nu_source.empty()) kv("nu_source", b.nu_source);
  kv("epsilon", format_double(b.epsilon));
  kv("sup_freq", format_double(b.sup_freq));
  kv("significant_count", std::to_string(outcome.significant_count));
  if (outcome.quantile) {
    kv("permutations", std::to_string(outcome.quantile->deviations.size()));
    kv("quantile_position", std::to_string(outcome.quantile->position));
    kv("delta_quantile", format_double(outcome.quantile->delta_quantile));
  }
}

nlohmann::json outcome_json(const MethodOutcome& outcome) {
  nlohmann::json j;
  j["method"] = method_label(outcome.method);
  j["records"] = outcome.records;
  j["significant_count"] = outcome.significant_count;
  j["bound_report"] = outcome.report;
  j["quantile"] = outcome.quantile ? nlohmann::json(*outcome.quantile) : nlohmann::json(nullptr);
  return j;
}

void write_json(std::ostream& out, const MethodOutcome& outcome) { out << outcome_json(outcome).dump(2) << '\n'; }

std::vector<OutputRecord> read_tsv_records(std::istream& in) {
  std::vector<OutputRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 6) throw std::invalid_argument("malformed TSV row: " + line);
    OutputRecord r;
    r.rank = std::stoul(fields[0]);
    r.pattern = fields[1];
    r.quality = parse_double(fields[2]);
    r.frequency = parse_double(fields[3]);
    r.threshold_margin = parse_double(fields[4]);
    r.significant = fields[5] == "true";
    out.push_back(std::move(r));
  }
  return out;
}

void to_json(nlohmann::json& j, const TrialSummary& s) {
  j = nlohmann::json{{"method", s.method},
                     {"trials", s.trials},
                     {"rejections", s.rejections},
                     {"empirical_fwer", s.empirical_fwer},
                     {"planted_hits", s.planted_hits}};
}

void from_json(const nlohmann::json& j, TrialSummary& s) {
  s.method = j.at("method").get<std::string>();
  s.trials = j.at("trials").get<std::size_t>();
  s.rejections = j.at("rejections").get<std::size_t>();
  s.empirical_fwer = j.at("empirical_fwer").get<double>();
  s.planted_hits = j.at("planted_hits").get<std::size_t>();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  Fnv1a h;
  h.add(to_string(cfg.method));
  h.add(format_double(cfg.delta));
  h.add(std::to_string(cfg.resamples));
  h.add(std::to_string(cfg.permutations));
  h.add(std::to_string(cfg.seed));
  h.add(std::to_string(cfg.language.max_length));
  h.add(std::to_string(cfg.language.bins));
  h.add(cfg.language.forms.to_string());
  h.add(cfg.language.mode == LanguageMode::subgroup ? "subgroup" : "itemset");
  h.add(cfg.top_k ? std::to_string(*cfg.top_k) : "none");
  h.add(cfg.n_hat_source == ProjectionSource::empirical ? "empirical" : "closed_form");
  return h.value();
}

const SweepCell& SweepResult::cell(std::size_t c, TestingMode mode) const {
  const auto it =
      std::find_if(cells.begin(), cells.end(), [&](const SweepCell& s) { return s.c == c && s.mode == mode; });
  if (it == cells.end()) throw std::out_of_range("no sweep cell for c=" + std::to_string(c));
  return *it;
}

SweepResult sweep_c(const Dataset& d, const RunConfig& cfg, const std::vector<std::size_t>& c_values,
                    const std::vector<TestingMode>& modes, const std::string& dataset_id) {
  if (c_values.empty()) throw ConfigError("c_values must be non-empty");
  if (modes.empty()) throw ConfigError("at least one testing mode is required");
  cfg.validate();
  SweepResult result;
  result.dataset_id = dataset_id;
  result.config_hash = config_hash(cfg);
  const SelectorIndex index(d, cfg.language);
  for (const auto c : c_values) {
    RunConfig cell_cfg = cfg;
    cell_cfg.resamples = c;
    for (const auto mode : modes) {
      const auto start = Clock::now();
      const auto report = fsr_bounds(index, d, mode, cell_cfg);
      const double seconds = seconds_since(start);
      result.cells.push_back({c, mode, report.epsilon, report.d_tilde, resampling_addend(d.m(), c, cfg.delta),
                              seconds});
    }
  }
  return result;
}

nlohmann::json sweep_json(const SweepResult& sweep) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : sweep.cells) {
    cells.push_back({{"c", c.c},
                     {"mode", to_string(c.mode)},
                     {"epsilon", c.epsilon},
                     {"d_tilde", c.d_tilde},
                     {"addend", c.addend},
                     {"seconds", c.seconds}});
  }
  std::ostringstream hash;
  hash << std::hex << sweep.config_hash;
  return {{"dataset", sweep.dataset_id}, {"config_hash", hash.str()}, {"cells", cells}};
}

void write_sweep_tsv(std::ostream& out, const SweepResult& sweep) {
  out << "c\tmode\tepsilon\td_tilde\taddend\tseconds\n";
  for (const auto& c : sweep.cells) {
    out << c.c << '\t' << to_string(c.mode) << '\t' << format_double(c.epsilon) << '\t' << format_double(c.d_tilde)
        << '\t' << format_double(c.addend) << '\t' << format_double(c.seconds) << '\n';
  }
  out << "# dataset=" << sweep.dataset_id << '\n' << "# config_hash=" << std::hex << sweep.config_hash << std::dec
      << '\n';
}

std::vector<ComparisonRow> compare_methods(const Dataset& d, const RunConfig& cfg,
                                           const std::vector<Method>& methods) {
  if (methods.empty()) throw ConfigError("at least one method is required");
  cfg.validate();
  const SelectorIndex index(d, cfg.language);
  std::vector<ComparisonRow> rows;
  for (const auto method : methods) {
    RunConfig run_cfg = cfg;
    run_cfg.method = method;
    run_cfg.top_k.reset();
    const auto outcome = run_method(index, d, run_cfg);
    rows.push_back({method, outcome.report.epsilon, outcome.report.eps_T, outcome.significant_count,
                    outcome.bound_seconds});
  }
  return rows;
}

nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"method", method_label(r.method)},
                   {"threshold", r.threshold},
                   {"eps_T", r.eps_T},
                   {"significant_count", r.significant_count},
                   {"bound_seconds", r.bound_seconds}});
  }
  return out;
}

void write_comparison_tsv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "method\tthreshold\teps_T\tsignificant_count\tbound_seconds\n";
  for (const auto& r : rows) {
    out << method_label(r.method) << '\t' << format_double(r.threshold) << '\t' << format_double(r.eps_T) << '\t'
        << r.significant_count << '\t' << format_double(r.bound_seconds) << '\n';
  }
}

}  // namespace fsr

#include "fsr/language.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace fsr {
namespace {

std::string format_threshold(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  double back = 0.0;
  std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
  if (back == v) return buf;
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void check_selector(const Selector& s, const Dataset& d) {
  if (s.column >= d.feature_count()) throw ConfigError("selector references column out of range");
  const auto& f = d.feature(s.column);
  if (s.form == SelectorForm::equals) {
    if (!f.is_categorical()) throw ConfigError("equals selector on non-categorical column '" + f.schema.name + "'");
  } else if (!f.is_continuous()) {
    throw ConfigError("numeric selector on non-continuous column '" + f.schema.name + "'");
  }
}

void enumerate_covers(std::span<const Selector> base, std::span<const BitVector> covers,
                      const std::vector<std::size_t>& next_start, std::size_t max_length, std::size_t first,
                      std::size_t depth, const BitVector* parent, std::unordered_set<BitVector>& seen) {
  for (std::size_t i = first; i < base.size(); ++i) {
    BitVector cover = parent ? (*parent & covers[i]) : covers[i];
    if (depth + 1 < max_length && next_start[i] < base.size()) {
      enumerate_covers(base, covers, next_start, max_length, next_start[i], depth + 1, &cover, seen);
    }
    seen.insert(std::move(cover));
  }
}

}  // namespace

std::string to_string(SelectorForm form) {
  switch (form) {
    case SelectorForm::equals: return "equals";
    case SelectorForm::less_than: return "less_than";
    case SelectorForm::at_least: return "at_least";
    case SelectorForm::interval: return "interval";
  }
  return "?";
}

SelectorForm parse_selector_form(const std::string& text) {
  if (text == "equals") return SelectorForm::equals;
  if (text == "less_than") return SelectorForm::less_than;
  if (text == "at_least") return SelectorForm::at_least;
  if (text == "interval") return SelectorForm::interval;
  throw ConfigError("unknown selector form '" + text + "'");
}

Selector Selector::equals(std::size_t column, std::int32_t code) {
  return Selector{column, SelectorForm::equals, code, 0.0, 0.0};
}
Selector Selector::less_than(std::size_t column, double threshold) {
  return Selector{column, SelectorForm::less_than, 0, 0.0, threshold};
}
Selector Selector::at_least(std::size_t column, double threshold) {
  return Selector{column, SelectorForm::at_least, 0, threshold, 0.0};
}
Selector Selector::interval(std::size_t column, double lo, double hi) {
  if (!(lo < hi)) throw ConfigError("interval selector requires lo < hi");
  return Selector{column, SelectorForm::interval, 0, lo, hi};
}

bool Selector::holds(const Dataset& d, std::size_t row) const {
  const auto& f = d.feature(column);
  switch (form) {
    case SelectorForm::equals: return f.codes[row] == code;
    case SelectorForm::less_than: return f.values[row] < hi;
    case SelectorForm::at_least: return f.values[row] >= lo;
    case SelectorForm::interval: return f.values[row] >= lo && f.values[row] < hi;
  }
  return false;
}

std::string render(const Selector& s, const Dataset& d) {
  const auto& f = d.feature(s.column);
  const std::string& name = f.schema.name;
  switch (s.form) {
    case SelectorForm::equals: return name + "=" + f.dictionary.at(static_cast<std::size_t>(s.code));
    case SelectorForm::less_than: return name + "<" + format_threshold(s.hi);
    case SelectorForm::at_least: return name + ">=" + format_threshold(s.lo);
    case SelectorForm::interval:
      return name + " in [" + format_threshold(s.lo) + ", " + format_threshold(s.hi) + ")";
  }
  return name;
}

Pattern::Pattern(std::vector<Selector> selectors) : selectors_(std::move(selectors)) {
  if (selectors_.empty()) throw ConfigError("pattern must contain at least one selector");
  std::sort(selectors_.begin(), selectors_.end());
  for (std::size_t i = 1; i < selectors_.size(); ++i) {
    if (selectors_[i].column == selectors_[i - 1].column) {
      throw ConfigError("pattern has two selectors on column " + std::to_string(selectors_[i].column));
    }
  }
}

Pattern Pattern::extended(const Selector& s) const {
  auto next = selectors_;
  next.push_back(s);
  return Pattern(std::move(next));
}

std::string Pattern::render(const Dataset& d) const {
  std::string out;
  for (const auto& s : selectors_) {
    if (!out.empty()) out += " AND ";
    out += fsr::render(s, d);
  }
  return out;
}

FormSet FormSet::parse(const std::string& comma_list) {
  FormSet forms;
  std::stringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    forms.insert(parse_selector_form(item));
  }
  if (forms.empty()) throw ConfigError("form list is empty");
  return forms;
}

std::string FormSet::to_string() const {
  std::string out;
  for (auto f : {SelectorForm::equals, SelectorForm::less_than, SelectorForm::at_least, SelectorForm::interval}) {
    if (!contains(f)) continue;
    if (!out.empty()) out += ",";
    out += fsr::to_string(f);
  }
  return out;
}

void LanguageConfig::validate() const {
  if (max_length < 1) throw ConfigError("max pattern length z must be >= 1");
  if (bins < 1) throw ConfigError("bins must be >= 1");
  if (forms.empty()) throw ConfigError("at least one selector form must be enabled");
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ConfigError("quantile of empty column");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lower = static_cast<std::size_t>(std::floor(h));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lower);
  return values[lower] + frac * (values[upper] - values[lower]);
}

std::vector<double> cut_points(const std::vector<double>& values, std::size_t bins) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (std::size_t i = 1; i <= bins; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(bins + 1);
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lower = static_cast<std::size_t>(std::floor(h));
    const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
    const double q = sorted[lower] + (h - static_cast<double>(lower)) * (sorted[upper] - sorted[lower]);
    if (cuts.empty() || q > cuts.back()) cuts.push_back(q);
  }
  return cuts;
}

std::vector<Selector> base_selectors(const Dataset& d, const LanguageConfig& cfg) {
  cfg.validate();
  std::vector<Selector> out;
  for (std::size_t c = 0; c < d.feature_count(); ++c) {
    const auto& f = d.feature(c);
    if (cfg.mode == LanguageMode::itemset) {
      if (!f.is_categorical()) {
        throw ConfigError("itemset mode requires binary columns; '" + f.schema.name + "' is continuous");
      }
      for (const auto& v : f.dictionary) {
        if (v != "0" && v != "1") {
          throw ConfigError("itemset mode requires 0/1 columns; '" + f.schema.name + "' has value '" + v + "'");
        }
      }
      if (auto code = f.code_of("1")) {
        if (std::find(f.codes.begin(), f.codes.end(), *code) != f.codes.end()) {
          out.push_back(Selector::equals(c, *code));
        }
      }
      continue;
    }
    if (f.is_categorical()) {
      if (!cfg.forms.contains(SelectorForm::equals)) continue;
      std::vector<bool> observed(f.dictionary.size(), false);
      for (auto code : f.codes) observed[static_cast<std::size_t>(code)] = true;
      for (std::size_t k = 0; k < observed.size(); ++k) {
        if (observed[k]) out.push_back(Selector::equals(c, static_cast<std::int32_t>(k)));
      }
      continue;
    }
    const auto cuts = cut_points(f.values, cfg.bins);
    if (cfg.forms.contains(SelectorForm::less_than)) {
      for (double t : cuts) out.push_back(Selector::less_than(c, t));
    }
    if (cfg.forms.contains(SelectorForm::at_least)) {
      for (double t : cuts) out.push_back(Selector::at_least(c, t));
    }
    if (cfg.forms.contains(SelectorForm::interval)) {
      for (std::size_t a = 0; a < cuts.size(); ++a) {
        for (std::size_t b = a + 1; b < cuts.size(); ++b) out.push_back(Selector::interval(c, cuts[a], cuts[b]));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Cover selector_cover(const Selector& s, const Dataset& d) {
  check_selector(s, d);
  BitVector bits(d.m());
  for (std::size_t i = 0; i < d.m(); ++i) {
    if (s.holds(d, i)) bits.set(i);
  }
  return Cover(std::move(bits));
}

Cover evaluate(const Pattern& p, const Dataset& d) {
  BitVector bits = selector_cover(p.selectors().front(), d).bits();
  for (std::size_t k = 1; k < p.size(); ++k) bits &= selector_cover(p.selectors()[k], d).bits();
  return Cover(std::move(bits));
}

std::vector<Pattern> refine(const std::optional<Pattern>& parent, std::span<const Selector> base,
                            const LanguageConfig& cfg) {
  std::vector<Pattern> children;
  if (!parent) {
    for (const auto& s : base) children.emplace_back(std::vector<Selector>{s});
    return children;
  }
  if (parent->size() >= cfg.max_length) return children;
  const std::size_t last_column = parent->last().column;
  for (const auto& s : base) {
    if (s.column > last_column) children.push_back(parent->extended(s));
  }
  return children;
}

std::uint64_t count_distinct_projections(const Dataset& d, const LanguageConfig& cfg) {
  const auto base = base_selectors(d, cfg);
  std::vector<BitVector> covers;
  covers.reserve(base.size());
  for (const auto& s : base) covers.push_back(selector_cover(s, d).bits());
  std::vector<std::size_t> next_start(base.size(), base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::size_t j = i;
    while (j < base.size() && base[j].column <= base[i].column) ++j;
    next_start[i] = j;
  }
  std::unordered_set<BitVector> seen;
  enumerate_covers(base, covers, next_start, cfg.max_length, 0, 0, nullptr, seen);
  return seen.size();
}

double projection_bound_closed_form_log(std::size_t m, std::size_t d, std::size_t z) {
  if (m < 1 || d < 1 || z < 1) throw ConfigError("closed-form projection bound needs m, d, z >= 1");
  const double zd = static_cast<double>(z);
  return zd * (3.0 + std::log(static_cast<double>(d)) + 2.0 * std::log(static_cast<double>(m)) - std::log(4.0) -
               3.0 * std::log(zd));
}

std::uint64_t language_size(std::span<const Selector> base, std::size_t max_length) {
  // Elementary symmetric sums of per-column selector counts, up to degree z.
  std::vector<long double> per_column;
  for (std::size_t i = 0; i < base.size();) {
    std::size_t j = i;
    while (j < base.size() && base[j].column == base[i].column) ++j;
    per_column.push_back(static_cast<long double>(j - i));
    i = j;
  }
  std::vector<long double> e(max_length + 1, 0.0L);
  e[0] = 1.0L;
  for (auto n : per_column) {
    for (std::size_t k = max_length; k >= 1; --k) e[k] += e[k - 1] * n;
  }
  long double total = 0.0L;
  for (std::size_t k = 1; k <= max_length; ++k) total += e[k];
  if (total >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(total + 0.5L);
}

}  // namespace fsr

std::size_t std::hash<fsr::Selector>::operator()(const fsr::Selector& s) const noexcept {
  std::size_t h = std::hash<std::size_t>{}(s.column);
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  mix(static_cast<std::size_t>(s.form));
  mix(std::hash<std::int32_t>{}(s.code));
  mix(std::hash<double>{}(s.lo));
  mix(std::hash<double>{}(s.hi));
  return h;
}

std::size_t std::hash<fsr::Pattern>::operator()(const fsr::Pattern& p) const noexcept {
  std::size_t h = p.size();
  for (const auto& s : p.selectors()) {
    h ^= std::hash<fsr::Selector>{}(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsr/bitvector.hpp"
#include "fsr/data.hpp"

namespace fsr {

/// Invalid run or language configuration (bad flag values, incompatible mode).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Transactions supporting a pattern, C_P(D).
class Cover {
 public:
  Cover() = default;
  explicit Cover(BitVector bits) : bits_(std::move(bits)) {}

  std::size_t size() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  double frequency() const {
    return bits_.size() == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(bits_.size());
  }
  bool contains(std::size_t i) const { return bits_.test(i); }
  bool is_subset_of(const Cover& other) const { return bits_.is_subset_of(other.bits_); }
  const BitVector& bits() const { return bits_; }

  friend bool operator==(const Cover&, const Cover&) = default;

 private:
  BitVector bits_;
};

enum class SelectorForm : std::uint8_t { equals = 0, less_than = 1, at_least = 2, interval = 3 };

std::string to_string(SelectorForm form);
SelectorForm parse_selector_form(const std::string& text);

/// One condition on one feature column. Thresholds live in `lo` (at_least,
/// interval lower end) and `hi` (less_than, interval upper end); the unused
/// fields stay zero so that member-wise comparison is a total order.
struct Selector {
  std::size_t column = 0;
  SelectorForm form = SelectorForm::equals;
  std::int32_t code = 0;
  double lo = 0.0;
  double hi = 0.0;

  static Selector equals(std::size_t column, std::int32_t code);
  static Selector less_than(std::size_t column, double threshold);
  static Selector at_least(std::size_t column, double threshold);
  static Selector interval(std::size_t column, double lo, double hi);

  bool holds(const Dataset& d, std::size_t row) const;

  friend auto operator<=>(const Selector&, const Selector&) = default;
  friend bool operator==(const Selector&, const Selector&) = default;
};

/// Conjunction of 1..z selectors on distinct columns, stored in canonical
/// (column-ascending) order.
class Pattern {
 public:
  explicit Pattern(std::vector<Selector> selectors);

  const std::vector<Selector>& selectors() const { return selectors_; }
  std::size_t size() const { return selectors_.size(); }
  const Selector& last() const { return selectors_.back(); }
  Pattern extended(const Selector& s) const;

  /// Human-readable conjunction, e.g. `color=red AND weight<1.00`.
  std::string render(const Dataset& d) const;

  friend auto operator<=>(const Pattern&, const Pattern&) = default;
  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::vector<Selector> selectors_;
};

std::string render(const Selector& s, const Dataset& d);

enum class LanguageMode { subgroup, itemset };

/// Enabled selector forms as a bit mask.
class FormSet {
 public:
  constexpr FormSet() = default;
  constexpr FormSet(std::initializer_list<SelectorForm> forms) {
    for (auto f : forms) mask_ |= bit(f);
  }
  static constexpr FormSet all() {
    return {SelectorForm::equals, SelectorForm::less_than, SelectorForm::at_least, SelectorForm::interval};
  }
  static FormSet parse(const std::string& comma_list);

  constexpr bool contains(SelectorForm f) const { return (mask_ & bit(f)) != 0; }
  constexpr void insert(SelectorForm f) { mask_ |= bit(f); }
  constexpr bool empty() const { return mask_ == 0; }
  std::string to_string() const;

  friend constexpr bool operator==(FormSet, FormSet) = default;

 private:
  static constexpr std::uint8_t bit(SelectorForm f) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(f)); }
  std::uint8_t mask_ = 0;
};

struct LanguageConfig {
  std::size_t max_length = 2;  ///< z
  std::size_t bins = 5;        ///< cut points per continuous column
  FormSet forms = FormSet::all();
  LanguageMode mode = LanguageMode::subgroup;

  void validate() const;
};

/// Finite search alphabet: one equals-selector per observed categorical code,
/// quantile cut-point selectors per continuous column. Sorted by Selector order.
std::vector<Selector> base_selectors(const Dataset& d, const LanguageConfig& cfg);

/// Empirical quantile with linear interpolation between order statistics.
double empirical_quantile(std::vector<double> values, double p);
/// Distinct cut points at quantiles i/(bins+1), i = 1..bins, ascending.
std::vector<double> cut_points(const std::vector<double>& values, std::size_t bins);

Cover selector_cover(const Selector& s, const Dataset& d);
Cover evaluate(const Pattern& p, const Dataset& d);

/// Children of `parent` (or of the root when nullopt): append each base
/// selector whose column is strictly greater than the parent's last column.
std::vector<Pattern> refine(const std::optional<Pattern>& parent, std::span<const Selector> base,
                            const LanguageConfig& cfg);

/// Number of distinct covers over every pattern of the language (the empty
/// cover counts once if it occurs). Exhaustive enumeration.
std::uint64_t count_distinct_projections(const Dataset& d, const LanguageConfig& cfg);

/// ln of (e^3 d m^2 / (4 z^3))^z, the closed-form projection-count bound for
/// conjunctions of at most z conditions over d continuous features.
double projection_bound_closed_form_log(std::size_t m, std::size_t d, std::size_t z);

/// Number of patterns of the language (no evaluation), saturating at UINT64_MAX.
std::uint64_t language_size(std::span<const Selector> base, std::size_t max_length);

}  // namespace fsr

template <>
struct std::hash<fsr::Selector> {
  std::size_t operator()(const fsr::Selector& s) const noexcept;
};

template <>
struct std::hash<fsr::Pattern> {
  std::size_t operator()(const fsr::Pattern& p) const noexcept;
};

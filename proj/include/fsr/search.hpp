#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fsr/data.hpp"
#include "fsr/language.hpp"
#include "fsr/quality.hpp"

namespace fsr {

/// Base selectors of a language together with their precomputed covers.
/// Built once per (dataset, language); shared read-only by every search.
class SelectorIndex {
 public:
  SelectorIndex(const Dataset& d, const LanguageConfig& cfg);

  std::size_t m() const { return m_; }
  std::size_t size() const { return selectors_.size(); }
  std::size_t max_length() const { return max_length_; }
  const Selector& selector(std::size_t i) const { return selectors_[i]; }
  const std::vector<Selector>& selectors() const { return selectors_; }
  const BitVector& cover(std::size_t i) const { return covers_[i]; }
  /// First base index whose column is strictly greater than selector i's column.
  std::size_t next_column_start(std::size_t i) const { return next_start_[i]; }

  /// sup over the language of f_P(D). Refinements only shrink covers, so the
  /// maximum is attained on a single selector.
  double sup_frequency() const;
  /// Pattern for a path of base indices (root to node).
  Pattern pattern(std::span<const std::uint32_t> path) const;
  std::uint64_t language_size() const;

 private:
  std::size_t m_;
  std::size_t max_length_;
  std::vector<Selector> selectors_;
  std::vector<BitVector> covers_;
  std::vector<std::size_t> next_start_;
};

struct SearchOptions {
  bool prune = true;
  bool parallel = true;  ///< split depth-1 subtrees over OpenMP threads
};

struct SearchStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t nodes_pruned = 0;  ///< nodes whose subtree was cut by the optimistic estimate
};

struct SearchResult {
  double supremum = 0.0;  ///< -inf when the language is empty
  std::optional<Pattern> argmax;
  SearchStats stats;
};

struct ScoredPattern {
  Pattern pattern;
  QualityStat stat;
};

struct TopKResult {
  std::vector<ScoredPattern> entries;  ///< descending quality, ties in canonical order
  SearchStats stats;
};

/// Upper bound on the quality of every refinement of a pattern whose cover
/// holds `positives` label-1 transactions: keep all positives, drop the rest.
/// Evaluated through quality_from_counts so it dominates refinements exactly.
inline double optimistic_estimate_from_counts(std::size_t positives, std::size_t m, double center) {
  return quality_from_counts(positives, positives, m, center);
}
double optimistic_estimate(const Cover& cover, const LabelVector& labels, double center);

/// sup over the language of the centered quality (label_i - center) on the
/// given labels. Lossless pruning; ties resolved to the first pattern in
/// canonical DFS order.
SearchResult sup_quality(const SelectorIndex& index, const LabelVector& labels, double center,
                         SearchOptions options = {});
SearchResult sup_quality(const Dataset& d, const LabelVector& labels, double center, const LanguageConfig& cfg);

/// k highest-quality patterns, exact.
TopKResult top_k(const SelectorIndex& index, const LabelVector& labels, double center, std::size_t k,
                 SearchOptions options = {});
TopKResult top_k(const Dataset& d, const LabelVector& labels, double center, const LanguageConfig& cfg,
                 std::size_t k);

/// Every pattern with quality >= base + slope * frequency (slope >= 0),
/// sorted like top_k. Subtrees are cut when the optimistic estimate falls
/// below `base`.
std::vector<ScoredPattern> patterns_above(const SelectorIndex& index, const LabelVector& labels, double center,
                                          double base, double slope, SearchOptions options = {},
                                          SearchStats* stats = nullptr);

/// Straightforward single-threaded recursive versions of the kernels above,
/// kept as the reference the parallel implementation is tested against.
namespace serial {

SearchResult sup_quality(const SelectorIndex& index, const LabelVector& labels, double center, bool prune);
TopKResult top_k(const SelectorIndex& index, const LabelVector& labels, double center, std::size_t k, bool prune);

}  // namespace serial

}  // namespace fsr

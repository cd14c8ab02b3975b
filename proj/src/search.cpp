#include "fsr/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>

#include <omp.h>

namespace fsr {
namespace {

using Word = BitVector::Word;
using Path = std::vector<std::uint32_t>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Entry {
  double quality;
  Path path;
  std::size_t support;
  std::size_t positives;
};

// Strict total order: higher quality first, then canonical (DFS) order.
bool ranks_before(const Entry& a, const Entry& b) {
  if (a.quality != b.quality) return a.quality > b.quality;
  return a.path < b.path;
}

// Monotone max on a shared incumbent threshold.
void raise_to(std::atomic<double>& cell, double value) {
  double current = cell.load(std::memory_order_relaxed);
  while (value > current && !cell.compare_exchange_weak(current, value, std::memory_order_relaxed)) {
  }
}

class SupVisitor {
 public:
  explicit SupVisitor(std::atomic<double>* shared) : shared_(shared) {}

  void visit(const Path& path, double q, std::size_t, std::size_t) {
    if (q > best_) {
      best_ = q;
      best_path_ = path;
      raise_to(*shared_, q);
    }
  }
  bool prunable(double optimistic) const {
    return optimistic < std::max(best_, shared_->load(std::memory_order_relaxed));
  }

  double best() const { return best_; }
  const Path& best_path() const { return best_path_; }

 private:
  std::atomic<double>* shared_;
  double best_ = kNegInf;
  Path best_path_;
};

class TopKVisitor {
 public:
  TopKVisitor(std::size_t k, std::atomic<double>* shared) : k_(k), shared_(shared) {}

  void visit(const Path& path, double q, std::size_t support, std::size_t positives) {
    Entry e{q, path, support, positives};
    auto worse_on_top = [](const Entry& a, const Entry& b) { return ranks_before(a, b); };
    if (heap_.size() < k_) {
      heap_.push_back(std::move(e));
      std::push_heap(heap_.begin(), heap_.end(), worse_on_top);
    } else if (ranks_before(e, heap_.front())) {
      std::pop_heap(heap_.begin(), heap_.end(), worse_on_top);
      heap_.back() = std::move(e);
      std::push_heap(heap_.begin(), heap_.end(), worse_on_top);
    } else {
      return;
    }
    if (heap_.size() == k_) raise_to(*shared_, heap_.front().quality);
  }
  bool prunable(double optimistic) const {
    double threshold = shared_->load(std::memory_order_relaxed);
    if (heap_.size() == k_) threshold = std::max(threshold, heap_.front().quality);
    return optimistic < threshold;
  }

  std::vector<Entry>& entries() { return heap_; }

 private:
  std::size_t k_;
  std::atomic<double>* shared_;
  std::vector<Entry> heap_;
};

class ThresholdVisitor {
 public:
  ThresholdVisitor(double base, double slope, std::size_t m) : base_(base), slope_(slope), m_(m) {}

  void visit(const Path& path, double q, std::size_t support, std::size_t positives) {
    const double f = static_cast<double>(support) / static_cast<double>(m_);
    if (q >= base_ + slope_ * f) found_.push_back(Entry{q, path, support, positives});
  }
  bool prunable(double optimistic) const { return optimistic < base_; }

  std::vector<Entry>& entries() { return found_; }

 private:
  double base_;
  double slope_;
  std::size_t m_;
  std::vector<Entry> found_;
};

// Depth-first walk of one depth-1 subtree with per-depth scratch covers.
class Walker {
 public:
  Walker(const SelectorIndex& index, const LabelVector& labels, double center, bool prune)
      : index_(index),
        labels_(labels.bits().words().data()),
        words_(labels.bits().word_count()),
        center_(center),
        prune_(prune),
        scratch_(index.max_length(), std::vector<Word>(labels.bits().word_count())) {
    path_.reserve(index.max_length());
  }

  template <class Visitor>
  void walk_root(std::size_t root, Visitor& visitor) {
    walk(root, 0, nullptr, visitor);
  }

  const SearchStats& stats() const { return stats_; }

 private:
  template <class Visitor>
  void walk(std::size_t sel, std::size_t depth, const Word* parent, Visitor& visitor) {
    const Word* sel_words = index_.cover(sel).words().data();
    const Word* node_words = sel_words;
    std::size_t support = 0;
    std::size_t positives = 0;
    if (parent == nullptr) {
      for (std::size_t w = 0; w < words_; ++w) {
        support += static_cast<std::size_t>(std::popcount(sel_words[w]));
        positives += static_cast<std::size_t>(std::popcount(sel_words[w] & labels_[w]));
      }
    } else {
      Word* out = scratch_[depth].data();
      for (std::size_t w = 0; w < words_; ++w) {
        const Word x = parent[w] & sel_words[w];
        out[w] = x;
        support += static_cast<std::size_t>(std::popcount(x));
        positives += static_cast<std::size_t>(std::popcount(x & labels_[w]));
      }
      node_words = out;
    }

    path_.push_back(static_cast<std::uint32_t>(sel));
    ++stats_.nodes_visited;
    visitor.visit(path_, quality_from_counts(positives, support, index_.m(), center_), support, positives);

    const std::size_t first_child = index_.next_column_start(sel);
    if (depth + 1 < index_.max_length() && first_child < index_.size()) {
      if (prune_ && visitor.prunable(optimistic_estimate_from_counts(positives, index_.m(), center_))) {
        ++stats_.nodes_pruned;
      } else {
        for (std::size_t child = first_child; child < index_.size(); ++child) {
          walk(child, depth + 1, node_words, visitor);
        }
      }
    }
    path_.pop_back();
  }

  const SelectorIndex& index_;
  const Word* labels_;
  std::size_t words_;
  double center_;
  bool prune_;
  std::vector<std::vector<Word>> scratch_;
  Path path_;
  SearchStats stats_;
};

// Runs one visitor per depth-1 subtree, in parallel when requested.
template <class Visitor>
SearchStats run_subtrees(const SelectorIndex& index, const LabelVector& labels, double center,
                         const SearchOptions& options, std::vector<Visitor>& visitors) {
  if (labels.size() != index.m()) throw std::invalid_argument("label vector length differs from dataset");
  SearchStats total;
  const auto roots = static_cast<std::int64_t>(index.size());
#pragma omp parallel if (options.parallel && roots > 1)
  {
    Walker walker(index, labels, center, options.prune);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < roots; ++r) {
      walker.walk_root(static_cast<std::size_t>(r), visitors[static_cast<std::size_t>(r)]);
    }
#pragma omp critical(fsr_search_stats)
    {
      total.nodes_visited += walker.stats().nodes_visited;
      total.nodes_pruned += walker.stats().nodes_pruned;
    }
  }
  return total;
}

std::vector<ScoredPattern> to_scored(const SelectorIndex& index, std::vector<Entry>& entries) {
  std::sort(entries.begin(), entries.end(), ranks_before);
  std::vector<ScoredPattern> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    QualityStat stat{e.quality, static_cast<double>(e.support) / static_cast<double>(index.m()), e.positives,
                     e.support};
    out.push_back(ScoredPattern{index.pattern(e.path), stat});
  }
  return out;
}

}  // namespace

SelectorIndex::SelectorIndex(const Dataset& d, const LanguageConfig& cfg)
    : m_(d.m()), max_length_(cfg.max_length), selectors_(base_selectors(d, cfg)) {
  covers_.reserve(selectors_.size());
  for (const auto& s : selectors_) covers_.push_back(selector_cover(s, d).bits());
  next_start_.resize(selectors_.size());
  for (std::size_t i = 0; i < selectors_.size(); ++i) {
    std::size_t j = i;
    while (j < selectors_.size() && selectors_[j].column <= selectors_[i].column) ++j;
    next_start_[i] = j;
  }
}

double SelectorIndex::sup_frequency() const {
  std::size_t best = 0;
  for (const auto& c : covers_) best = std::max(best, c.count());
  return static_cast<double>(best) / static_cast<double>(m_);
}

Pattern SelectorIndex::pattern(std::span<const std::uint32_t> path) const {
  std::vector<Selector> sels;
  sels.reserve(path.size());
  for (auto i : path) sels.push_back(selectors_.at(i));
  return Pattern(std::move(sels));
}

std::uint64_t SelectorIndex::language_size() const { return fsr::language_size(selectors_, max_length_); }

double optimistic_estimate(const Cover& cover, const LabelVector& labels, double center) {
  return optimistic_estimate_from_counts(intersect_count(cover.bits(), labels.bits()), labels.size(), center);
}

SearchResult sup_quality(const SelectorIndex& index, const LabelVector& labels, double center,
                         SearchOptions options) {
  std::atomic<double> shared{kNegInf};
  std::vector<SupVisitor> visitors(index.size(), SupVisitor(&shared));
  SearchResult result;
  result.stats = run_subtrees(index, labels, center, options, visitors);
  result.supremum = kNegInf;
  const Path* best = nullptr;
  for (const auto& v : visitors) {
    if (v.best() > result.supremum) {
      result.supremum = v.best();
      best = &v.best_path();
    }
  }
  if (best) result.argmax = index.pattern(*best);
  return result;
}

SearchResult sup_quality(const Dataset& d, const LabelVector& labels, double center, const LanguageConfig& cfg) {
  return sup_quality(SelectorIndex(d, cfg), labels, center);
}

TopKResult top_k(const SelectorIndex& index, const LabelVector& labels, double center, std::size_t k,
                 SearchOptions options) {
  if (k < 1) throw ConfigError("top-k requires k >= 1");
  std::atomic<double> shared{kNegInf};
  std::vector<TopKVisitor> visitors(index.size(), TopKVisitor(k, &shared));
  TopKResult result;
  result.stats = run_subtrees(index, labels, center, options, visitors);
  std::vector<Entry> merged;
  for (auto& v : visitors) {
    for (auto& e : v.entries()) merged.push_back(std::move(e));
  }
  std::sort(merged.begin(), merged.end(), ranks_before);
  if (merged.size() > k) merged.resize(k);
  result.entries = to_scored(index, merged);
  return result;
}

TopKResult top_k(const Dataset& d, const LabelVector& labels, double center, const LanguageConfig& cfg,
                 std::size_t k) {
  return top_k(SelectorIndex(d, cfg), labels, center, k);
}

std::vector<ScoredPattern> patterns_above(const SelectorIndex& index, const LabelVector& labels, double center,
                                          double base, double slope, SearchOptions options, SearchStats* stats) {
  if (slope < 0.0) throw std::invalid_argument("frequency slope must be nonnegative");
  std::vector<ThresholdVisitor> visitors(index.size(), ThresholdVisitor(base, slope, index.m()));
  const SearchStats s = run_subtrees(index, labels, center, options, visitors);
  if (stats) *stats = s;
  std::vector<Entry> merged;
  for (auto& v : visitors) {
    for (auto& e : v.entries()) merged.push_back(std::move(e));
  }
  return to_scored(index, merged);
}

}  // namespace fsr

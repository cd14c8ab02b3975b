#include <algorithm>
#include <limits>

#include "fsr/search.hpp"

namespace fsr::serial {
namespace {

struct Context {
  const SelectorIndex& index;
  const LabelVector& labels;
  double center;
  bool prune;
  SearchStats stats;
};

bool better(const ScoredPattern& a, const ScoredPattern& b) {
  if (a.stat.value != b.stat.value) return a.stat.value > b.stat.value;
  return a.pattern < b.pattern;
}

// Visits `pattern` (cover already computed) and recurses into its children.
template <class Visit, class Threshold>
void descend(Context& ctx, const std::vector<Selector>& selectors, std::size_t last, const BitVector& cover,
             Visit&& visit, Threshold&& threshold) {
  ++ctx.stats.nodes_visited;
  const QualityStat stat = empirical_quality(Cover(cover), ctx.labels, ctx.center);
  visit(Pattern(selectors), stat);
  if (selectors.size() >= ctx.index.max_length()) return;
  const std::size_t first = ctx.index.next_column_start(last);
  if (first >= ctx.index.size()) return;
  if (ctx.prune && optimistic_estimate_from_counts(stat.positives, ctx.labels.size(), ctx.center) < threshold()) {
    ++ctx.stats.nodes_pruned;
    return;
  }
  for (std::size_t child = first; child < ctx.index.size(); ++child) {
    auto next = selectors;
    next.push_back(ctx.index.selector(child));
    descend(ctx, next, child, cover & ctx.index.cover(child), visit, threshold);
  }
}

template <class Visit, class Threshold>
SearchStats walk_all(const SelectorIndex& index, const LabelVector& labels, double center, bool prune,
                     Visit&& visit, Threshold&& threshold) {
  Context ctx{index, labels, center, prune, {}};
  for (std::size_t root = 0; root < index.size(); ++root) {
    descend(ctx, {index.selector(root)}, root, index.cover(root), visit, threshold);
  }
  return ctx.stats;
}

}  // namespace

SearchResult sup_quality(const SelectorIndex& index, const LabelVector& labels, double center, bool prune) {
  SearchResult result;
  result.supremum = -std::numeric_limits<double>::infinity();
  result.stats = walk_all(
      index, labels, center, prune,
      [&](const Pattern& p, const QualityStat& stat) {
        if (stat.value > result.supremum) {
          result.supremum = stat.value;
          result.argmax = p;
        }
      },
      [&] { return result.supremum; });
  return result;
}

TopKResult top_k(const SelectorIndex& index, const LabelVector& labels, double center, std::size_t k,
                 bool prune) {
  TopKResult result;
  auto& best = result.entries;  // kept sorted, size <= k
  result.stats = walk_all(
      index, labels, center, prune,
      [&](const Pattern& p, const QualityStat& stat) {
        ScoredPattern candidate{p, stat};
        auto pos = std::upper_bound(best.begin(), best.end(), candidate, better);
        if (best.size() < k) {
          best.insert(pos, std::move(candidate));
        } else if (pos != best.end()) {
          best.insert(pos, std::move(candidate));
          best.pop_back();
        }
      },
      [&] {
        return best.size() < k ? -std::numeric_limits<double>::infinity() : best.back().stat.value;
      });
  return result;
}

}  // namespace fsr::serial

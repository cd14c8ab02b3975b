#include "fsr/quality.hpp"

#include <cmath>
#include <stdexcept>

namespace fsr {

QualityStat empirical_quality(const Cover& cover, const LabelVector& labels, double center) {
  if (cover.size() != labels.size()) throw std::invalid_argument("cover and labels differ in length");
  QualityStat stat;
  const std::size_t m = labels.size();
  stat.support = cover.count();
  stat.positives = intersect_count(cover.bits(), labels.bits());
  stat.frequency = static_cast<double>(stat.support) / static_cast<double>(m);
  stat.value = quality_from_counts(stat.positives, stat.support, m, center);
  return stat;
}

double alpha_quality(const Cover& cover, const LabelVector& labels, double alpha) {
  if (cover.size() != labels.size()) throw std::invalid_argument("cover and labels differ in length");
  const std::size_t support = cover.count();
  if (support == 0) return 0.0;
  const double f = static_cast<double>(support) / static_cast<double>(labels.size());
  const double cover_mean =
      static_cast<double>(intersect_count(cover.bits(), labels.bits())) / static_cast<double>(support);
  return std::pow(f, alpha) * (cover_mean - labels.mean());
}

}  // namespace fsr
